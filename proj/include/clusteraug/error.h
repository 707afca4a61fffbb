// Copyright 2026 The clusteraug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLUSTERAUG_ERROR_H_
#define CLUSTERAUG_ERROR_H_

#include <stdexcept>
#include <string>

namespace clusteraug {

// Broad failure categories. The command-line tool maps kTransport, kTimeout
// and kAuth to exit status 2 and everything else to 1.
enum class ErrorKind {
  kInvalidInput,
  kContract,
  kSchema,
  kTransport,
  kTimeout,
  kAuth,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  bool IsTransport() const {
    return kind_ == ErrorKind::kTransport || kind_ == ErrorKind::kTimeout ||
           kind_ == ErrorKind::kAuth;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void ThrowInvalid(const std::string& message) {
  throw Error(ErrorKind::kInvalidInput, message);
}

}  // namespace clusteraug

#endif  // CLUSTERAUG_ERROR_H_
