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
#include <utility>
#include <vector>

#include "lc/model/context.h"
#include "lc/privacy/audit.h"

namespace lc::temporal {

struct TemporalConfig {
  double state_lambda = 0.1;   // per day
  double trait_lambda = 0.005; // per day
  double floor = 0.05;

  model::DecayPolicy policy_for(model::FeatureKind kind) const {
    return {kind == model::FeatureKind::kTrait ? trait_lambda : state_lambda, floor};
  }
  model::ModelLimits limits() const { return {state_lambda}; }
};

// exp(-lambda * elapsed days). Throws Error(kNegativeElapsed) if now < observed_at.
double decay_weight(Timestamp observed_at, Timestamp now, const model::DecayPolicy& policy);

// Read-time weight of a feature: decay_weight * stored confidence. Features
// observed after `now` count as fresh.
double effective_weight(const model::Feature& f, Timestamp now);

// Exponential smoothing: s1 = v1, sk = alpha * vk + (1 - alpha) * s(k-1).
std::vector<std::pair<Timestamp, double>> smooth_series(
    const std::vector<std::pair<Timestamp, double>>& values, double alpha);

// Adaptive forgetting pass. A State feature whose effective weight drops below
// its floor is removed. A Trait feature is first demoted (confidence halved,
// demoted_at = now) and removed only when it trips again at a later `now`.
// Returns the removed keys; each removal is audited as feature_pruned.
std::vector<std::string> prune_forgotten(model::LearnerContext& ctx, Timestamp now,
                                         privacy::AuditChain* audit = nullptr,
                                         std::string_view actor = "lc",
                                         const model::ModelLimits& limits = {});

}  // namespace lc::temporal
