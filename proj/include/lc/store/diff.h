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

#include <map>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "lc/model/context.h"

namespace lc::store {

// A context viewed as a flat map from element identifier to canonical JSON:
//   node:<id>  edge:<src>|<relation>|<dst>  feature:<key>
//   beliefs  evidence_log  meta:version  meta:clock
using Entries = std::map<std::string, nlohmann::json>;

struct ChangeSet {
  Entries added;
  Entries removed;                                                     // old values
  std::map<std::string, std::pair<nlohmann::json, nlohmann::json>> modified;  // old, new

  bool empty() const { return added.empty() && removed.empty() && modified.empty(); }
  std::size_t size() const { return added.size() + removed.size() + modified.size(); }
  friend bool operator==(const ChangeSet&, const ChangeSet&) = default;
};

Entries context_entries(const model::LearnerContext& ctx);
// Throws Error(kInvalidContext) if the entries do not describe a valid context.
model::LearnerContext context_from_entries(const std::string& learner_id, const Entries& entries);

// Throws Error(kLearnerMismatch) when a and b belong to different learners.
ChangeSet diff(const model::LearnerContext& a, const model::LearnerContext& b);

// apply(a, diff(a, b)) == b. Throws Error(kInvalidArgument) when the change
// set was not computed against a context equal to `base` on the touched
// elements.
model::LearnerContext apply(const model::LearnerContext& base, const ChangeSet& changes);

nlohmann::json to_json(const ChangeSet& c);
ChangeSet change_set_from_json(const nlohmann::json& j);

}  // namespace lc::store
