// Copyright 2026 The DeepSSIM Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEEPSSIM_CORE_ERROR_HPP_
#define DEEPSSIM_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace deepssim {

// Failure categories. The C API maps these one-to-one onto status codes.
enum class ErrorKind {
  kInvalidArgument,
  kIo,
  kFormat,
  kValidation,
  kDegenerate,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

// Warning sink. Defaults to stderr; the C API lets callers redirect it.
using LogSink = void (*)(const std::string& message, void* user);
void SetWarningSink(LogSink sink, void* user);
void Warn(const std::string& message);

}  // namespace deepssim

#endif  // DEEPSSIM_CORE_ERROR_HPP_
