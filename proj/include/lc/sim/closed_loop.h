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
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lc/model/context.h"
#include "lc/sim/agents.h"

namespace lc::sim {

inline const std::vector<std::string> kConsistencyAttributes = {
    "misconception", "anxiety", "conscientiousness", "language_proficiency"};

struct SimConfig {
  protocol::ServingConfig serving;
  protocol::SnapshotRequest request;  // learner_id is filled in per context
  SignalConfig signals;
  NeedTable needs;
};

// Runs `turns` turns, tutor first. Under context_aware the tutor receives a
// snapshot served in-process from `lc` (none if nothing is disclosable);
// under context_blind it receives none. Throws Error(kOddTurnCount) unless
// turns is even and >= 2.
Transcript simulate_dialogue(const model::LearnerContext& lc, LearnerAgent& learner,
                             TutorAgent& tutor, int turns, Condition condition,
                             std::uint64_t seed, const SimConfig& config = {});

// Throws Error(kEmptyTranscript) for a transcript without turns and
// Error(kEvidenceNotInTranscript) when a claim's span is not a substring.
Recovery recover_context(const Transcript& transcript, RecoveryAgent& agent);

struct ConsistencyResult {
  std::map<std::string, bool> per_attribute;
  double overall = 0;
};

nlohmann::json to_json(const ConsistencyResult& r);

// Lowercase, whitespace collapsed, trailing punctuation stripped.
std::string normalize_belief(std::string_view s);

// Misconceptions match when the normalized underlying beliefs agree as sets.
// A profile attribute matches when both levels are equal or both are absent;
// a missing recovery of a present attribute counts as incorrect.
ConsistencyResult consistency_score(const model::BeliefModel& original,
                                    const model::BeliefModel& recovered);

struct AttributeRate {
  std::size_t correct = 0;
  std::size_t total = 0;
  double rate() const { return total ? static_cast<double>(correct) / total : 0.0; }
  // Percentage rounded to one decimal, e.g. 91.4.
  double percent() const;
};

std::map<std::string, AttributeRate> aggregate_consistency(
    const std::vector<ConsistencyResult>& results);

// Random BeliefModel with 1-2 misconception triples and all three profile
// attributes set.
model::BeliefModel random_beliefs(std::uint64_t seed);
// A valid context for `beliefs`: learner node, the beliefs, and one affect
// feature mirroring the anxiety level.
model::LearnerContext context_for(const std::string& learner_id, const model::BeliefModel& beliefs,
                                  Timestamp at);

// Shortest dialogue length at which every reference signal has surfaced.
int saturation_turns(const SignalConfig& signals = {}, std::size_t max_misconceptions = 2);

struct ClosedLoopCase {
  std::uint64_t seed;
  ConsistencyResult result;
};

struct ClosedLoopReport {
  int n = 0;
  int turns = 0;
  std::uint64_t seed = 0;
  std::vector<ClosedLoopCase> cases;
  std::map<std::string, AttributeRate> rates;
  // turns -> attribute -> accuracy, over even lengths 2..turns.
  std::map<int, std::map<std::string, double>> length_sweep;
};

ClosedLoopReport run_closed_loop(int n, int turns, std::uint64_t seed, const SimConfig& config = {});
nlohmann::json to_json(const ClosedLoopReport& r);

}  // namespace lc::sim
