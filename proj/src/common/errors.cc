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

#include "gvfnav/errors.h"

namespace gvfnav {
namespace {

std::string JoinIssues(const std::vector<FieldIssue>& issues) {
  std::string text = "validation failed";
  for (const auto& issue : issues) {
    text += "; ";
    text += issue.path.empty() ? "/" : issue.path;
    text += ": ";
    text += issue.message;
  }
  return text;
}

}  // namespace

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain:
      return "domain_error";
    case ErrorCode::kDegenerateTangent:
      return "degenerate_tangent";
    case ErrorCode::kDegenerateField:
      return "degenerate_field";
    case ErrorCode::kConfiguration:
      return "configuration_error";
    case ErrorCode::kValidation:
      return "validation_error";
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kState:
      return "state_error";
    case ErrorCode::kNotFound:
      return "not_found";
  }
  return "unknown";
}

ValidationError::ValidationError(std::vector<FieldIssue> issues)
    : Error(ErrorCode::kValidation, JoinIssues(issues)),
      issues_(std::move(issues)) {}

}  // namespace gvfnav
