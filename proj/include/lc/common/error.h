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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lc {

// Every failure the library reports carries one of these codes. Names are
// stable: they appear verbatim in CLI output and JSON-RPC error data.
enum class ErrorCode {
  // model
  kEmptyId,
  kKindDimensionMismatch,
  kDuplicateLearnerNode,
  kMissingEndpoint,
  kWeightOutOfRange,
  kPrerequisiteCycle,
  kInvalidProbability,
  kTraitDecayTooFast,
  kEmptyTripleField,
  kUnknownProfileAttribute,
  kInvalidFeature,
  // temporal
  kNegativeElapsed,
  kInvalidParams,
  kUnresolvableTarget,
  kStaleEvent,
  kInvalidEvent,
  kNonMonotoneTimestamps,
  kAlphaOutOfRange,
  // prioritize
  kInvalidDistribution,
  kMissingRelevance,
  kEmptySamples,
  kNoFeatures,
  kInvalidBudget,
  // privacy
  kBudgetExhausted,
  kNonPositiveEpsilon,
  kInvalidPolicy,
  // store
  kInvalidContext,
  kVersionNotFound,
  kStorageFailure,
  kLearnerMismatch,
  kPostMergeInvalid,
  // protocol
  kLearnerNotFound,
  kEmptyAfterFiltering,
  kInvalidProbe,
  // sim
  kOddTurnCount,
  kEmptyTranscript,
  kEvidenceNotInTranscript,
  kTooFewContexts,
  kScheduleLengthMismatch,
  // shared
  kParseError,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lc
