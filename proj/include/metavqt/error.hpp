// Copyright 2026 The metavqt Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace metavqt {

enum class Errc {
  kNotSquare,
  kNotHermitian,
  kIndexOutOfRange,
  kInvalidDensityMatrix,
  kDimensionMismatch,
  kNotNormalized,
  kZeroSupport,
  kInvalidSize,
  kLengthMismatch,
  kTooLarge,
  kNonPositiveBeta,
  kEmptyGrid,
  kInvalidGrid,
  kBadTarget,
  kSlotMismatch,
  kBadSplit,
  kNonFiniteLoss,
  kConfigInvalid,
  kShapeMismatch,
  kDegenerateDenominator,
  kCheckpointMismatch,
  kParseError,
  kValidationError,
  kIncompleteRecord,
  kSchemaVersion,
  kIoError,
};

/// Stable identifier used in machine-readable error output.
std::string_view errc_name(Errc code) noexcept;

/// The single exception type thrown by the library. The code identifies the
/// failure class; the message carries context for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace metavqt
