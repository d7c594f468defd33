// Copyright 2026 The crset Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
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

namespace crset {

enum class ErrorCode {
  kInvalidArgument,
  kCapacityExceeded,
  kBuildDiverged,
  kFormatOverflow,
  kUnsupportedFormat,
  kCorruptPayload,
  kUnknownId,
  kNoPublication,
  kMalformedEntry,
  kImplausibleSeries,
  kDegenerateDesign,
  kIo,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kCapacityExceeded: return "CapacityExceeded";
    case ErrorCode::kBuildDiverged: return "BuildDiverged";
    case ErrorCode::kFormatOverflow: return "FormatOverflow";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptPayload: return "CorruptPayload";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kNoPublication: return "NoPublication";
    case ErrorCode::kMalformedEntry: return "MalformedEntry";
    case ErrorCode::kImplausibleSeries: return "ImplausibleSeries";
    case ErrorCode::kDegenerateDesign: return "DegenerateDesign";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map them onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace crset
