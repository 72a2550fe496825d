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

#include "lc/sim/closed_loop.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "lc/common/error.h"
#include "lc/common/random.h"
#include "lc/model/json.h"

namespace lc::sim {

namespace {

struct TripleBank {
  const char* belief;
  const char* example;
  const char* trigger;
};

constexpr TripleBank kBank[] = {
    {"multiplication always makes a number bigger", "0.5 x 8 = 16", "multiplying by a decimal"},
    {"a longer decimal is a larger number", "0.125 > 0.5", "comparing decimals"},
    {"heavier objects fall faster", "the brick lands first", "dropping two objects"},
    {"the equals sign means write the answer next", "3 + 4 = 7 + 2 = 9", "chained arithmetic"},
    {"plants get their mass from the soil", "the pot lost 10 kg of soil", "plant growth"},
    {"correlation implies causation", "ice cream causes drowning", "reading a scatter plot"},
    {"a fraction with a bigger denominator is bigger", "1/8 > 1/4", "comparing fractions"},
    {"current is used up by a bulb", "less current leaves the bulb", "series circuits"},
};

model::Level random_level(Rng& rng) { return static_cast<model::Level>(rng.uniform_int(0, 2)); }

}  // namespace

Transcript simulate_dialogue(const model::LearnerContext& lc, LearnerAgent& learner,
                             TutorAgent& tutor, int turns, Condition condition,
                             std::uint64_t seed, const SimConfig& config) {
  if (turns < 2 || turns % 2 != 0) {
    throw Error(ErrorCode::kOddTurnCount, "turns must be even and at least 2, got " +
                                              std::to_string(turns));
  }
  std::optional<protocol::ContextSnapshot> snapshot;
  if (condition == Condition::kContextAware) {
    auto request = config.request;
    request.learner_id = lc.learner_id();
    try {
      snapshot = protocol::build_snapshot(lc, request, config.serving, lc.clock());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyAfterFiltering) throw;
    }
  }
  Transcript t{{}, seed, condition};
  for (int i = 1; i <= turns; ++i) {
    const auto turn_seed = derive_seed(seed, {static_cast<std::uint64_t>(i)});
    if (i % 2 == 1) {
      t.turns.push_back({Speaker::kTutor, tutor.respond(snapshot, t.turns, turn_seed), i});
    } else {
      t.turns.push_back({Speaker::kStudent, learner.respond(lc.beliefs(), t.turns, seed), i});
    }
  }
  return t;
}

Recovery recover_context(const Transcript& transcript, RecoveryAgent& agent) {
  if (transcript.turns.empty()) throw Error(ErrorCode::kEmptyTranscript, "transcript has no turns");
  auto r = agent.recover(transcript);
  const auto text = transcript.text();
  for (const auto& [claim, span] : r.evidence) {
    if (span.empty() || text.find(span) == std::string::npos) {
      throw Error(ErrorCode::kEvidenceNotInTranscript,
                  "evidence for '" + claim + "' is not quoted from the transcript");
    }
  }
  model::check_belief(r.beliefs);
  return r;
}

nlohmann::json to_json(const ConsistencyResult& r) {
  return {{"per_attribute", r.per_attribute}, {"overall", r.overall}};
}

std::string normalize_belief(std::string_view s) {
  std::string out;
  bool space = false;
  for (const unsigned char c : s) {
    if (std::isspace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(c));
  }
  while (!out.empty() && std::ispunct(static_cast<unsigned char>(out.back()))) out.pop_back();
  return out;
}

ConsistencyResult consistency_score(const model::BeliefModel& original,
                                    const model::BeliefModel& recovered) {
  auto beliefs = [](const model::BeliefModel& b) {
    std::set<std::string> s;
    for (const auto& t : b.misconceptions) s.insert(normalize_belief(t.underlying_belief));
    return s;
  };
  ConsistencyResult r;
  r.per_attribute["misconception"] = beliefs(original) == beliefs(recovered);
  for (std::size_t i = 1; i < kConsistencyAttributes.size(); ++i) {
    const auto& a = kConsistencyAttributes[i];
    const auto o = original.profile.find(a);
    const auto x = recovered.profile.find(a);
    r.per_attribute[a] = o == original.profile.end()
                             ? x == recovered.profile.end()
                             : x != recovered.profile.end() && x->second == o->second;
  }
  int correct = 0;
  for (const auto& [a, ok] : r.per_attribute) correct += ok;
  r.overall = correct / 4.0;
  return r;
}

double AttributeRate::percent() const { return std::round(rate() * 1000.0) / 10.0; }

std::map<std::string, AttributeRate> aggregate_consistency(
    const std::vector<ConsistencyResult>& results) {
  std::map<std::string, AttributeRate> out;
  for (const auto& a : kConsistencyAttributes) out[a];
  for (const auto& r : results) {
    for (const auto& [a, ok] : r.per_attribute) {
      ++out[a].total;
      out[a].correct += ok;
    }
  }
  return out;
}

model::BeliefModel random_beliefs(std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x62656c6965667301ULL}));
  model::BeliefModel b;
  const auto n = rng.uniform_int(1, 2);
  std::set<std::int64_t> picked;
  while (static_cast<std::int64_t>(picked.size()) < n) {
    picked.insert(rng.uniform_int(0, std::size(kBank) - 1));
  }
  for (const auto i : picked) b.misconceptions.push_back({kBank[i].belief, kBank[i].example, kBank[i].trigger});
  for (const auto& a : model::kProfileAttributes) b.profile[std::string(a)] = random_level(rng);
  b.provenance = {"fixture", model::ConsentScope::kInstruction, std::nullopt, {}};
  return b;
}

model::LearnerContext context_for(const std::string& learner_id, const model::BeliefModel& beliefs,
                                  Timestamp at) {
  auto ctx = model::LearnerContext::create(learner_id, at);
  auto b = beliefs;
  b.provenance.recorded_at = at;
  ctx.attach_belief(std::move(b));
  model::Feature f;
  f.key = "who.affect.anxiety";
  f.dimension = model::Dimension::kWho;
  f.kind = model::FeatureKind::kState;
  const auto it = beliefs.profile.find("anxiety");
  const double level = it == beliefs.profile.end() ? 1.0 : static_cast<double>(it->second);
  f.value = model::Probability{0.15 + 0.35 * level};
  f.confidence = 1.0;
  f.observed_at = at;
  f.updated_at = at;
  f.decay = {0.1, 0.05};
  f.provenance = {"fixture", model::ConsentScope::kInstruction, std::nullopt, at};
  ctx.set_feature(std::move(f));
  return ctx;
}

int saturation_turns(const SignalConfig& signals, std::size_t max_misconceptions) {
  const int latest = std::max({signals.conscientiousness_onset_max + signals.language_onset_gap,
                               signals.conscientiousness_onset_max,
                               2 * static_cast<int>(max_misconceptions), 2});
  return latest % 2 == 0 ? latest : latest + 1;
}

ClosedLoopReport run_closed_loop(int n, int turns, std::uint64_t seed, const SimConfig& config) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be positive");
  ClosedLoopReport report{n, turns, seed, {}, {}, {}};
  ReferenceLearner learner(config.signals);
  // No probing: recovery sees only what the learner volunteers.
  ReferenceTutor tutor(0, config.needs, config.signals);
  ReferenceRecovery recovery(config.signals);

  std::map<int, std::vector<ConsistencyResult>> by_length;
  std::vector<ConsistencyResult> results;
  for (int i = 0; i < n; ++i) {
    const auto case_seed = derive_seed(seed, {static_cast<std::uint64_t>(i)});
    const auto beliefs = random_beliefs(case_seed);
    const auto ctx = context_for("sim-" + std::to_string(i), beliefs, Timestamp{});
    const auto full = simulate_dialogue(ctx, learner, tutor, turns, Condition::kContextBlind,
                                        case_seed, config);
    const auto result = consistency_score(beliefs, recover_context(full, recovery).beliefs);
    report.cases.push_back({case_seed, result});
    results.push_back(result);
    // Prefixes of the full dialogue are the dialogues of shorter lengths.
    for (int len = 2; len <= turns; len += 2) {
      Transcript prefix{{full.turns.begin(), full.turns.begin() + len}, full.seed, full.condition};
      by_length[len].push_back(consistency_score(beliefs, recover_context(prefix, recovery).beliefs));
    }
  }
  report.rates = aggregate_consistency(results);
  for (const auto& [len, rs] : by_length) {
    for (const auto& [a, rate] : aggregate_consistency(rs)) report.length_sweep[len][a] = rate.rate();
  }
  return report;
}

nlohmann::json to_json(const ClosedLoopReport& r) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases) cases.push_back({{"seed", c.seed}, {"result", to_json(c.result)}});
  nlohmann::json rates = nlohmann::json::object();
  for (const auto& [a, rate] : r.rates) {
    rates[a] = {{"correct", rate.correct}, {"total", rate.total}, {"rate", rate.rate()},
                {"percent", rate.percent()}};
  }
  nlohmann::json sweep = nlohmann::json::array();
  for (const auto& [len, acc] : r.length_sweep) sweep.push_back({{"turns", len}, {"accuracy", acc}});
  return {{"report", "closed_loop"}, {"schema_version", 1}, {"n", r.n}, {"turns", r.turns},
          {"seed", r.seed}, {"rates", rates}, {"length_sweep", sweep}, {"cases", cases}};
}

}  // namespace lc::sim
