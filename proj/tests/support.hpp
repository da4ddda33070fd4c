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

#ifndef W2W_TESTS_SUPPORT_HPP
#define W2W_TESTS_SUPPORT_HPP

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "w2w/bitext.hpp"
#include "w2w/log.hpp"

namespace support {

// Bitext from (source line, target line) pairs.
inline w2w::Bitext bitext(std::initializer_list<std::pair<const char*, const char*>> lines,
                          w2w::FunctionWords fw = {}) {
  std::string src, tgt;
  for (const auto& [s, t] : lines) {
    src += s;
    src += '\n';
    tgt += t;
    tgt += '\n';
  }
  std::istringstream a(src), b(tgt);
  return w2w::read_bitext(a, b, {}, fw);
}

// Random bitext over small vocabularies; some words are function words.
inline w2w::Bitext random_bitext(std::size_t segments, std::size_t max_len,
                                 std::size_t vocab, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  w2w::FunctionWords fw;
  fw.source = {"s0", "s1"};
  fw.target = {"t0", "t1"};
  w2w::BitextBuilder builder(w2w::function_word_classifier(fw));
  for (std::size_t i = 0; i < segments; ++i) {
    std::vector<std::string> s(1 + rng() % max_len), t(1 + rng() % max_len);
    for (auto& w : s) w = "s" + std::to_string(rng() % vocab);
    for (auto& w : t) w = "t" + std::to_string(rng() % vocab);
    builder.add(s, t, i + 1);
  }
  return std::move(builder).build();
}

// Temporary directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("w2w-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Captures log lines for the lifetime of the object.
struct LogCapture {
  std::vector<std::pair<w2w::LogLevel, std::string>> lines;
  LogCapture() {
    w2w::set_log_sink([this](w2w::LogLevel l, const std::string& m) {
      lines.emplace_back(l, m);
    });
  }
  ~LogCapture() { w2w::set_log_sink(nullptr); }
  std::size_t warnings() const {
    std::size_t n = 0;
    for (const auto& [l, m] : lines) n += l == w2w::LogLevel::warning;
    return n;
  }
};

}  // namespace support

#endif  // W2W_TESTS_SUPPORT_HPP
