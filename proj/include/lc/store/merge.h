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

#include <string>
#include <vector>

#include "lc/model/context.h"
#include "lc/privacy/audit.h"
#include "lc/store/diff.h"

namespace lc::store {

struct MergeResult {
  model::LearnerContext context;
  ChangeSet local_changes;                // diff(local, merged)
  std::vector<std::string> kind_conflicts;  // feature keys whose Trait/State kind disagreed
};

// Deterministic last-writer-wins merge of two replicas of one learner.
// Features are ordered by (updated_at, then the lexicographically smaller
// provenance source, then the smaller canonical JSON); nodes, edges and
// beliefs by their provenance recorded_at with the same tie-breaks. Elements
// present on one side only are kept. Evidence logs are unioned and ordered by
// time. The merged version is max(versions) + 1.
//
// Replicas with equal content hashes merge to `local` unchanged. Throws
// Error(kLearnerMismatch) for different learners and Error(kPostMergeInvalid)
// if the merged context fails schema conformance. Kind disagreements are
// appended to `audit` as merge_conflict records.
MergeResult sync_merge(const model::LearnerContext& local, const model::LearnerContext& remote,
                       privacy::AuditChain* audit = nullptr, std::string_view actor = "lc");

}  // namespace lc::store
