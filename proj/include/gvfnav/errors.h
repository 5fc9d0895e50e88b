// Copyright 2026 The gvfnav Authors
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

#ifndef GVFNAV_ERRORS_H_
#define GVFNAV_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gvfnav {

enum class ErrorCode {
  kDomain,
  kDegenerateTangent,
  kDegenerateField,
  kConfiguration,
  kValidation,
  kInvalidArgument,
  kState,
  kNotFound,
};

std::string_view ToString(ErrorCode code);

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parameter outside the domain of a path or segment.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::kDomain, what) {}
};

// ||f'(w)|| too small to define curvature or a tangent direction.
class DegenerateTangentError : public Error {
 public:
  explicit DegenerateTangentError(const std::string& what)
      : Error(ErrorCode::kDegenerateTangent, what) {}
};

// Planar projection of the augmented field vanished.
class DegenerateFieldError : public Error {
 public:
  explicit DegenerateFieldError(const std::string& what)
      : Error(ErrorCode::kDegenerateField, what) {}
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what)
      : Error(ErrorCode::kConfiguration, what) {}
};

class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& what)
      : Error(ErrorCode::kInvalidArgument, what) {}
};

class StateError : public Error {
 public:
  explicit StateError(const std::string& what)
      : Error(ErrorCode::kState, what) {}
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& what)
      : Error(ErrorCode::kNotFound, what) {}
};

// One problem found while validating a document, addressed by a JSON-pointer
// style path such as "/guidance/k1".
struct FieldIssue {
  std::string path;
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<FieldIssue> issues);
  ValidationError(std::string path, std::string message)
      : ValidationError(std::vector<FieldIssue>{{std::move(path),
                                                 std::move(message)}}) {}

  const std::vector<FieldIssue>& issues() const { return issues_; }

 private:
  std::vector<FieldIssue> issues_;
};

}  // namespace gvfnav

#endif  // GVFNAV_ERRORS_H_
