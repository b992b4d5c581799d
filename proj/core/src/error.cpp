// Copyright 2026 The egocollect Authors
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

#include "egocollect/error.hpp"

namespace egocollect {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kBehindCamera: return "BehindCamera";
    case ErrorCode::kZeroReference: return "ZeroReference";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kInsufficientPairs: return "InsufficientPairs";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kWindowTooLarge: return "WindowTooLarge";
    case ErrorCode::kBadWindow: return "BadWindow";
    case ErrorCode::kAllBehindCamera: return "AllBehindCamera";
    case ErrorCode::kNotAFailure: return "NotAFailure";
    case ErrorCode::kDuplicateVersion: return "DuplicateVersion";
    case ErrorCode::kUnknownOperator: return "UnknownOperator";
    case ErrorCode::kUnknownVersion: return "UnknownVersion";
    case ErrorCode::kIncompatibleVersion: return "IncompatibleVersion";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kNoHealthyNode: return "NoHealthyNode";
    case ErrorCode::kInvalidScenario: return "InvalidScenario";
    case ErrorCode::kOutOfOrderEvent: return "OutOfOrderEvent";
    case ErrorCode::kBadTrimRange: return "BadTrimRange";
    case ErrorCode::kNothingApproved: return "NothingApproved";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

}  // namespace egocollect
