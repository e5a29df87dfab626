/*
 * Copyright 2026 The Herald Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HERALD_ERROR_H_
#define HERALD_ERROR_H_

#include <stdexcept>
#include <string>

namespace herald {

// Broad failure classes. The CLI maps them onto process exit codes.
enum class ErrorKind {
  kInvalidArgument,      // Caller violated a precondition.
  kConfig,               // Bad configuration or rule file.
  kMissingPrerequisite,  // A pipeline stage ran before its inputs exist.
  kDataValidation,       // Malformed or inconsistent data file.
  kIo,                   // Filesystem failure.
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error InvalidArgument(const std::string& message) {
  return Error(ErrorKind::kInvalidArgument, message);
}
inline Error ConfigError(const std::string& message) {
  return Error(ErrorKind::kConfig, message);
}
inline Error DataError(const std::string& message) {
  return Error(ErrorKind::kDataValidation, message);
}
inline Error MissingPrerequisite(const std::string& message) {
  return Error(ErrorKind::kMissingPrerequisite, message);
}
inline Error IoError(const std::string& message) {
  return Error(ErrorKind::kIo, message);
}

}  // namespace herald

#endif  // HERALD_ERROR_H_
