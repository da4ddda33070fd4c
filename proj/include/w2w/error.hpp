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

#ifndef W2W_ERROR_HPP
#define W2W_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace w2w {

// Each code maps one-to-one onto a w2w_status value of the C API and onto a
// distinct message prefix of the command-line tool.
enum class ErrorCode {
  io,
  format,
  encoding,
  mismatch,
  version,
  schema,
  argument,
  precondition,
  degenerate,
  induction,
};

std::string_view error_prefix(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace w2w

#endif  // W2W_ERROR_HPP
