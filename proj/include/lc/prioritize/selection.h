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

#include <functional>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "lc/model/context.h"

namespace lc::prioritize {

enum class Task { kFormativeFeedback, kAssessment, kCollaboration, kGeneric };
std::string_view to_string(Task t);
Task parse_task(std::string_view s);

// Multiplies the score of features whose key equals `key_prefix` or lies
// under it. The longest matching prefix wins; unmatched features weigh 1.
struct TaskWeightRule {
  Task task;
  std::string key_prefix;
  double weight;
};

struct SelectionConfig {
  std::vector<TaskWeightRule> rules = {
      {Task::kFormativeFeedback, "who.affect", 2.0},
      {Task::kCollaboration, "with_whom", 2.0},
  };
  // Information term used for features with no outcome samples.
  double unsampled_information = 1.0;
  int bins = 5;
};

double task_weight(std::string_view key, Task task, const SelectionConfig& config);

// One observation pairing a feature's value with the outcome it accompanied.
// Numeric feature values are binned equal-width before estimating MI.
struct OutcomeSample {
  std::variant<std::string, double> feature;
  std::string outcome;
};
using OutcomeSamples = std::map<std::string, std::vector<OutcomeSample>>;

struct ScoredFeature {
  std::string key;
  double score;

  friend bool operator==(const ScoredFeature&, const ScoredFeature&) = default;
};

struct WorkingContext {
  std::vector<ScoredFeature> features;  // score non-increasing, ties by key
  std::set<std::string> nodes;          // induced subgraph, learner node included
  std::vector<model::EdgeKey> edges;
  int budget = 1;
};

// Scores every eligible feature as task weight x MI(feature; outcome) x
// effective weight at `now`, and keeps the `budget` best. Throws
// Error(kInvalidBudget) for budget < 1 and Error(kNoFeatures) when nothing is
// eligible.
WorkingContext select_features(const model::LearnerContext& ctx, const OutcomeSamples& samples,
                               int budget, Task task, Timestamp now,
                               const SelectionConfig& config = {},
                               const std::function<bool(const model::Feature&)>& eligible = {});

nlohmann::json to_json(const WorkingContext& w);

}  // namespace lc::prioritize
