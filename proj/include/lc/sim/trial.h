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

#include "lc/sim/closed_loop.h"

namespace lc::sim {

struct TrialArm {
  std::string label;
  Condition condition;
};

// Next-item success model shared by the trial and the MRT: after each tutor
// turn the learner succeeds with probability base + delta * aligned. Draws
// use common random numbers, so arms differ only through alignment.
struct OutcomeModel {
  double base_success = 0.5;
  double aligned_delta = 0.2;
};

struct TrialConfig {
  SimConfig sim;
  OutcomeModel outcome;
  int probe_turns = 3;
  double effect_threshold = 0.20;
};

struct RunMetrics {
  std::size_t context = 0;
  std::uint64_t seed = 0;
  int time_to_alignment = 0;  // tutor-turn ordinal; tutor turns + 1 if never aligned
  double alignment_rate = 0;
  double outcome = 0;  // mean next-item success
};

struct ArmSummary {
  std::string label;
  Condition condition;
  std::vector<RunMetrics> runs;
  double mean_time_to_alignment = 0;
  double mean_alignment_rate = 0;
  double mean_outcome = 0;
  double sd_outcome = 0;
};

struct TrialReport {
  int turns = 0;
  std::vector<ArmSummary> arms;  // exactly two
  std::optional<double> cohens_d;  // arms[0] vs arms[1] on outcome; null if undefined
  bool meets_effect_threshold = false;
  double effect_threshold = 0.20;
};

// Cohen's d with the pooled standard deviation (n - 1 denominators). Returns
// 0 when both samples are constant and equal, nullopt when undefined.
std::optional<double> cohens_d(const std::vector<double>& a, const std::vector<double>& b);

// Runs every (context, seed) pair under both arms. Throws
// Error(kTooFewContexts) for fewer than two contexts and
// Error(kInvalidArgument) unless exactly two arms are given.
TrialReport warmstart_trial(const std::vector<model::LearnerContext>& contexts,
                            const std::vector<TrialArm>& arms, int turns,
                            const std::vector<std::uint64_t>& seeds, const TrialConfig& config = {});

nlohmann::json to_json(const TrialReport& r);

struct TrialPlan {
  std::vector<std::string> arms = {"injected", "withheld"};
  // One entry per decision point: true randomizes injection there (each unit
  // independently with `injection_probability`), false withholds context.
  std::vector<bool> injection_schedule;
  std::uint64_t seed = 0;
  int decision_points = 0;
  double injection_probability = 0.5;
  int replicates = 1;  // units per context
};

struct DecisionPointEstimate {
  int point = 0;  // 1-based
  std::size_t n_injected = 0;
  std::size_t n_withheld = 0;
  double mean_injected = 0;
  double mean_withheld = 0;
  std::optional<double> effect;  // null when either group is empty
  std::optional<double> ci_low;  // 95% Wald interval for the difference
  std::optional<double> ci_high;
};

// Each unit is one (context, replicate). At every decision point an injected
// unit's tutor sees the snapshot; a withheld one sees nothing and does not
// probe. Throws Error(kScheduleLengthMismatch).
std::vector<DecisionPointEstimate> micro_randomized_run(
    const TrialPlan& plan, const std::vector<model::LearnerContext>& contexts,
    const TrialConfig& config = {});

nlohmann::json to_json(const std::vector<DecisionPointEstimate>& estimates);

// Privacy/utility harness: reruns the context-aware arm under each policy and
// reports outcome deltas against the first policy. No shape is assumed.
struct PolicyLevel {
  std::string label;
  privacy::DisclosurePolicy policy;
};

struct PolicySweepRow {
  std::string label;
  double mean_outcome = 0;
  double mean_alignment_rate = 0;
  double outcome_delta = 0;  // relative to the first level
};

std::vector<PolicySweepRow> privacy_utility_sweep(const std::vector<model::LearnerContext>& contexts,
                                                  const std::vector<PolicyLevel>& levels, int turns,
                                                  const std::vector<std::uint64_t>& seeds,
                                                  const TrialConfig& config = {});

nlohmann::json to_json(const std::vector<PolicySweepRow>& rows);

}  // namespace lc::sim
