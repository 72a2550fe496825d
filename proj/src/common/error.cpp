// Copyright 2026 The Learning Context Authors
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

#include "lc/common/error.h"

namespace lc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyId: return "EmptyId";
    case ErrorCode::kKindDimensionMismatch: return "KindDimensionMismatch";
    case ErrorCode::kDuplicateLearnerNode: return "DuplicateLearnerNode";
    case ErrorCode::kMissingEndpoint: return "MissingEndpoint";
    case ErrorCode::kWeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::kPrerequisiteCycle: return "PrerequisiteCycle";
    case ErrorCode::kInvalidProbability: return "InvalidProbability";
    case ErrorCode::kTraitDecayTooFast: return "TraitDecayTooFast";
    case ErrorCode::kEmptyTripleField: return "EmptyTripleField";
    case ErrorCode::kUnknownProfileAttribute: return "UnknownProfileAttribute";
    case ErrorCode::kInvalidFeature: return "InvalidFeature";
    case ErrorCode::kNegativeElapsed: return "NegativeElapsed";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kUnresolvableTarget: return "UnresolvableTarget";
    case ErrorCode::kStaleEvent: return "StaleEvent";
    case ErrorCode::kInvalidEvent: return "InvalidEvent";
    case ErrorCode::kNonMonotoneTimestamps: return "NonMonotoneTimestamps";
    case ErrorCode::kAlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kMissingRelevance: return "MissingRelevance";
    case ErrorCode::kEmptySamples: return "EmptySamples";
    case ErrorCode::kNoFeatures: return "NoFeatures";
    case ErrorCode::kInvalidBudget: return "InvalidBudget";
    case ErrorCode::kBudgetExhausted: return "BudgetExhausted";
    case ErrorCode::kNonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::kInvalidPolicy: return "InvalidPolicy";
    case ErrorCode::kInvalidContext: return "InvalidContext";
    case ErrorCode::kVersionNotFound: return "VersionNotFound";
    case ErrorCode::kStorageFailure: return "StorageFailure";
    case ErrorCode::kLearnerMismatch: return "LearnerMismatch";
    case ErrorCode::kPostMergeInvalid: return "PostMergeInvalid";
    case ErrorCode::kLearnerNotFound: return "LearnerNotFound";
    case ErrorCode::kEmptyAfterFiltering: return "EmptyAfterFiltering";
    case ErrorCode::kInvalidProbe: return "InvalidProbe";
    case ErrorCode::kOddTurnCount: return "OddTurnCount";
    case ErrorCode::kEmptyTranscript: return "EmptyTranscript";
    case ErrorCode::kEvidenceNotInTranscript: return "EvidenceNotInTranscript";
    case ErrorCode::kTooFewContexts: return "TooFewContexts";
    case ErrorCode::kScheduleLengthMismatch: return "ScheduleLengthMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace lc
