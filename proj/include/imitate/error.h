// Copyright 2026 The Imitate Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IMITATE_ERROR_H_
#define IMITATE_ERROR_H_

#include <stdexcept>
#include <string>

namespace imitate {

// Failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
  kUsage,    // bad parameters or flags
  kData,     // malformed or unusable input data
  kNumeric,  // non-finite values or failed numerical preconditions
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void ThrowUsage(const std::string& message);
[[noreturn]] void ThrowData(const std::string& message);
[[noreturn]] void ThrowNumeric(const std::string& message);

}  // namespace imitate

#endif  // IMITATE_ERROR_H_
