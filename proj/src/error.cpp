/*
  Copyright (c) The w2w Authors.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#include "w2w/error.hpp"

#include <iostream>
#include <mutex>

#include "w2w/log.hpp"

namespace w2w {

std::string_view error_prefix(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return "io";
    case ErrorCode::format: return "format";
    case ErrorCode::encoding: return "encoding";
    case ErrorCode::mismatch: return "mismatch";
    case ErrorCode::version: return "version";
    case ErrorCode::schema: return "schema";
    case ErrorCode::argument: return "argument";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::induction: return "induction";
  }
  return "internal";
}

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

LogSink& sink() {
  static LogSink s = [](LogLevel level, const std::string& message) {
    std::cerr << (level == LogLevel::warning ? "warning: " : "") << message
              << '\n';
  };
  return s;
}

void emit(LogLevel level, const std::string& message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) sink()(level, message);
}

}  // namespace

void set_log_sink(LogSink s) {
  std::lock_guard lock(sink_mutex());
  sink() = std::move(s);
}

void log_info(const std::string& message) { emit(LogLevel::info, message); }
void log_warning(const std::string& message) {
  emit(LogLevel::warning, message);
}

}  // namespace w2w
