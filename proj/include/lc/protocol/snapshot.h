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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lc/model/context.h"
#include "lc/prioritize/selection.h"
#include "lc/privacy/audit.h"
#include "lc/privacy/blur.h"
#include "lc/privacy/budget.h"
#include "lc/privacy/policy.h"
#include "lc/store/canonical.h"
#include "lc/temporal/bkt.h"
#include "lc/temporal/decay.h"

namespace lc::protocol {

// Everything a server needs besides the store: the disclosure policy and the
// tuning of each pipeline stage.
struct ServingConfig {
  privacy::DisclosurePolicy policy;
  privacy::BlurConfig blur;
  prioritize::SelectionConfig selection;
  temporal::TemporalConfig temporal;
  temporal::BktParams bkt;
  double epsilon_total = 1.0;      // per-learner budget
  double aggregate_epsilon = 0.1;  // charged per DP aggregate
  std::uint64_t noise_seed = 0;
};

nlohmann::json to_json(const ServingConfig& c);
// Missing sections keep their defaults. Throws Error(kParseError) or
// Error(kInvalidPolicy).
ServingConfig serving_config_from_json(const nlohmann::json& j);

struct SnapshotRequest {
  std::string learner_id;
  model::ConsentScope purpose = model::ConsentScope::kInstruction;
  prioritize::Task task = prioritize::Task::kGeneric;
  int budget = 5;
  bool include_aggregates = false;
  std::string actor = "lc";
};

SnapshotRequest snapshot_request_from_json(const nlohmann::json& args);

struct WorkingEntry {
  std::string key;
  model::Value value;  // blurred
  model::FeatureKind kind;
  model::Dimension dimension;
  double confidence;  // effective weight at generation time
  double score;
  privacy::GranularityLevel granularity;
};

struct Aggregate {
  std::string name;
  double value;
  double epsilon;
  double scale;
};

struct ContextSnapshot {
  std::string learner_id;
  Timestamp generated_at{};
  std::vector<WorkingEntry> working;
  std::optional<model::BeliefModel> beliefs;  // absent when not disclosable
  int budget_used = 0;
  store::ContextDigest context_digest;
  std::uint64_t context_version = 0;
  std::vector<std::string> subgraph_nodes;
  std::vector<model::EdgeKey> subgraph_edges;
  std::vector<Aggregate> aggregates;
};

nlohmann::json to_json(const ContextSnapshot& s);

// Pseudo-keys under which belief components are matched against deny_keys.
inline constexpr std::string_view kBeliefMisconceptionsKey = "who.beliefs.misconceptions";
inline constexpr std::string_view kBeliefProfilePrefix = "who.beliefs.profile.";

// Read-only serving pipeline over one context version:
//   forget (on a copy) -> authorize -> select among allowed -> blur.
// Charges `budget` and audits budget_charged when aggregates are requested,
// audits denials, and appends snapshot_served on success.
//
// Throws Error(kEmptyAfterFiltering) when no feature survives authorization,
// Error(kBudgetExhausted) when an aggregate cannot be paid for, and
// Error(kInvalidBudget) for budget < 1.
ContextSnapshot build_snapshot(const model::LearnerContext& ctx, const SnapshotRequest& request,
                               const ServingConfig& config, Timestamp now,
                               privacy::PrivacyBudget* budget = nullptr,
                               privacy::AuditChain* audit = nullptr);

}  // namespace lc::protocol
