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

#include "metavqt/error.hpp"

namespace metavqt {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kNotSquare: return "NotSquare";
    case Errc::kNotHermitian: return "NotHermitian";
    case Errc::kIndexOutOfRange: return "IndexOutOfRange";
    case Errc::kInvalidDensityMatrix: return "InvalidDensityMatrix";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kNotNormalized: return "NotNormalized";
    case Errc::kZeroSupport: return "ZeroSupport";
    case Errc::kInvalidSize: return "InvalidSize";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kTooLarge: return "TooLarge";
    case Errc::kNonPositiveBeta: return "NonPositiveBeta";
    case Errc::kEmptyGrid: return "EmptyGrid";
    case Errc::kInvalidGrid: return "InvalidGrid";
    case Errc::kBadTarget: return "BadTarget";
    case Errc::kSlotMismatch: return "SlotMismatch";
    case Errc::kBadSplit: return "BadSplit";
    case Errc::kNonFiniteLoss: return "NonFiniteLoss";
    case Errc::kConfigInvalid: return "ConfigInvalid";
    case Errc::kShapeMismatch: return "ShapeMismatch";
    case Errc::kDegenerateDenominator: return "DegenerateDenominator";
    case Errc::kCheckpointMismatch: return "CheckpointMismatch";
    case Errc::kParseError: return "ParseError";
    case Errc::kValidationError: return "ValidationError";
    case Errc::kIncompleteRecord: return "IncompleteRecord";
    case Errc::kSchemaVersion: return "SchemaVersion";
    case Errc::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace metavqt
