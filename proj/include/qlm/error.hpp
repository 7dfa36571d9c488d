// Copyright 2026 The QLM Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlm {

enum class ErrorKind {
  InvalidArgument,
  StructureMismatch,
  Parse,
  DegenerateData,
  Configuration,
  Integration,
  ArtifactMismatch,
};

/// Machine-parsable category printed by the CLI, e.g. "structure-mismatch".
constexpr std::string_view category_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::StructureMismatch: return "structure-mismatch";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::DegenerateData: return "degenerate-data";
    case ErrorKind::Configuration: return "configuration-error";
    case ErrorKind::Integration: return "integration-error";
    case ErrorKind::ArtifactMismatch: return "artifact-mismatch";
  }
  return "error";
}

/// Every failure raised by the library carries one of the categories above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view category() const noexcept { return category_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::InvalidArgument, message);
}

}  // namespace qlm
