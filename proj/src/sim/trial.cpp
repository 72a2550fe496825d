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

#include "lc/sim/trial.h"

#include <cmath>
#include <numeric>

#include "lc/common/error.h"
#include "lc/common/random.h"

namespace lc::sim {

namespace {

constexpr std::uint64_t kOutcomeStream = 0x6f7574636f6d65ULL;
constexpr std::uint64_t kInjectStream = 0x696e6a656374ULL;

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0;
  for (const double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1));
}

RunMetrics score_run(const Transcript& t, const std::string& need, std::size_t context,
                     std::uint64_t seed, const OutcomeModel& outcome) {
  RunMetrics m{context, seed, 0, 0, 0};
  int ordinal = 0;
  int aligned = 0;
  double successes = 0;
  for (const auto& turn : t.turns) {
    if (turn.speaker != Speaker::kTutor) continue;
    ++ordinal;
    const bool ok = strategy_of(turn.text) == need;
    if (ok) {
      ++aligned;
      if (m.time_to_alignment == 0) m.time_to_alignment = ordinal;
    }
    Rng rng(derive_seed(seed, {kOutcomeStream, context, static_cast<std::uint64_t>(ordinal)}));
    successes += rng.uniform() < outcome.base_success + (ok ? outcome.aligned_delta : 0.0);
  }
  if (m.time_to_alignment == 0) m.time_to_alignment = ordinal + 1;
  m.alignment_rate = ordinal ? static_cast<double>(aligned) / ordinal : 0.0;
  m.outcome = ordinal ? successes / ordinal : 0.0;
  return m;
}

ArmSummary run_arm(const std::vector<model::LearnerContext>& contexts, const TrialArm& arm,
                   int turns, const std::vector<std::uint64_t>& seeds, const TrialConfig& config) {
  ArmSummary s{arm.label, arm.condition, {}, 0, 0, 0, 0};
  ReferenceLearner learner(config.sim.signals);
  ReferenceTutor tutor(config.probe_turns, config.sim.needs, config.sim.signals);
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    const auto need = config.sim.needs.strategy_for(contexts[c].beliefs());
    for (const auto seed : seeds) {
      const auto t = simulate_dialogue(contexts[c], learner, tutor, turns, arm.condition, seed,
                                       config.sim);
      s.runs.push_back(score_run(t, need, c, seed, config.outcome));
    }
  }
  std::vector<double> tta, rate, out;
  for (const auto& r : s.runs) {
    tta.push_back(r.time_to_alignment);
    rate.push_back(r.alignment_rate);
    out.push_back(r.outcome);
  }
  s.mean_time_to_alignment = mean(tta);
  s.mean_alignment_rate = mean(rate);
  s.mean_outcome = mean(out);
  s.sd_outcome = sample_sd(out);
  return s;
}

std::vector<double> outcomes(const ArmSummary& a) {
  std::vector<double> v;
  for (const auto& r : a.runs) v.push_back(r.outcome);
  return v;
}

}  // namespace

std::optional<double> cohens_d(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) return std::nullopt;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double sa = sample_sd(a);
  const double sb = sample_sd(b);
  const double pooled = std::sqrt(((na - 1) * sa * sa + (nb - 1) * sb * sb) / (na + nb - 2));
  const double diff = mean(a) - mean(b);
  if (pooled == 0) return diff == 0 ? std::optional<double>(0.0) : std::nullopt;
  return diff / pooled;
}

TrialReport warmstart_trial(const std::vector<model::LearnerContext>& contexts,
                            const std::vector<TrialArm>& arms, int turns,
                            const std::vector<std::uint64_t>& seeds, const TrialConfig& config) {
  if (contexts.size() < 2) {
    throw Error(ErrorCode::kTooFewContexts, "a trial needs at least two contexts");
  }
  if (arms.size() != 2) throw Error(ErrorCode::kInvalidArgument, "a trial compares exactly two arms");
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "a trial needs at least one seed");
  TrialReport r;
  r.turns = turns;
  r.effect_threshold = config.effect_threshold;
  for (const auto& arm : arms) r.arms.push_back(run_arm(contexts, arm, turns, seeds, config));
  r.cohens_d = cohens_d(outcomes(r.arms[0]), outcomes(r.arms[1]));
  r.meets_effect_threshold = r.cohens_d && *r.cohens_d >= config.effect_threshold;
  return r;
}

nlohmann::json to_json(const TrialReport& r) {
  nlohmann::json arms = nlohmann::json::array();
  for (const auto& a : r.arms) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& m : a.runs) {
      runs.push_back({{"context", m.context},
                      {"seed", m.seed},
                      {"time_to_alignment", m.time_to_alignment},
                      {"alignment_rate", m.alignment_rate},
                      {"outcome", m.outcome}});
    }
    arms.push_back({{"label", a.label},
                    {"condition", to_string(a.condition)},
                    {"n", a.runs.size()},
                    {"mean_time_to_alignment", a.mean_time_to_alignment},
                    {"mean_alignment_rate", a.mean_alignment_rate},
                    {"mean_outcome", a.mean_outcome},
                    {"sd_outcome", a.sd_outcome},
                    {"runs", runs}});
  }
  return {{"report", "warmstart_trial"},
          {"schema_version", 1},
          {"turns", r.turns},
          {"arms", arms},
          {"cohens_d", r.cohens_d ? nlohmann::json(*r.cohens_d) : nlohmann::json()},
          {"effect_threshold", r.effect_threshold},
          {"meets_effect_threshold", r.meets_effect_threshold}};
}

std::vector<DecisionPointEstimate> micro_randomized_run(
    const TrialPlan& plan, const std::vector<model::LearnerContext>& contexts,
    const TrialConfig& config) {
  if (plan.decision_points < 1 ||
      plan.injection_schedule.size() != static_cast<std::size_t>(plan.decision_points)) {
    throw Error(ErrorCode::kScheduleLengthMismatch,
                "schedule has " + std::to_string(plan.injection_schedule.size()) +
                    " entries for " + std::to_string(plan.decision_points) + " decision points");
  }
  if (contexts.empty() || plan.replicates < 1) {
    throw Error(ErrorCode::kInvalidArgument, "an MRT needs at least one unit");
  }

  ReferenceTutor tutor(0, config.sim.needs, config.sim.signals);
  std::vector<std::optional<protocol::ContextSnapshot>> snapshots;
  std::vector<std::string> needs;
  for (const auto& ctx : contexts) {
    auto request = config.sim.request;
    request.learner_id = ctx.learner_id();
    std::optional<protocol::ContextSnapshot> snap;
    try {
      snap = protocol::build_snapshot(ctx, request, config.sim.serving, ctx.clock());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyAfterFiltering) throw;
    }
    snapshots.push_back(std::move(snap));
    needs.push_back(config.sim.needs.strategy_for(ctx.beliefs()));
  }

  std::vector<DecisionPointEstimate> out;
  for (int k = 0; k < plan.decision_points; ++k) {
    std::vector<double> injected, withheld;
    for (std::size_t c = 0; c < contexts.size(); ++c) {
      for (int rep = 0; rep < plan.replicates; ++rep) {
        const auto unit = static_cast<std::uint64_t>(c) * 1'000'003ULL + rep;
        const auto point = static_cast<std::uint64_t>(k);
        bool inject = false;
        if (plan.injection_schedule[k]) {
          Rng coin(derive_seed(plan.seed, {kInjectStream, unit, point}));
          inject = coin.bernoulli(plan.injection_probability);
        }
        const std::vector<Turn> history;
        const auto text = tutor.respond(inject ? snapshots[c] : std::nullopt, history, 0);
        const bool aligned = strategy_of(text) == needs[c];
        Rng draw(derive_seed(plan.seed, {kOutcomeStream, unit, point}));
        const double p = config.outcome.base_success + (aligned ? config.outcome.aligned_delta : 0.0);
        (inject ? injected : withheld).push_back(draw.uniform() < p ? 1.0 : 0.0);
      }
    }
    DecisionPointEstimate e;
    e.point = k + 1;
    e.n_injected = injected.size();
    e.n_withheld = withheld.size();
    e.mean_injected = mean(injected);
    e.mean_withheld = mean(withheld);
    if (!injected.empty() && !withheld.empty()) {
      const double p1 = e.mean_injected;
      const double p0 = e.mean_withheld;
      const double se = std::sqrt(p1 * (1 - p1) / injected.size() + p0 * (1 - p0) / withheld.size());
      e.effect = p1 - p0;
      e.ci_low = *e.effect - 1.959963984540054 * se;
      e.ci_high = *e.effect + 1.959963984540054 * se;
    }
    out.push_back(e);
  }
  return out;
}

nlohmann::json to_json(const std::vector<DecisionPointEstimate>& estimates) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  nlohmann::json points = nlohmann::json::array();
  for (const auto& e : estimates) {
    points.push_back({{"point", e.point},
                      {"n_injected", e.n_injected},
                      {"n_withheld", e.n_withheld},
                      {"mean_injected", e.mean_injected},
                      {"mean_withheld", e.mean_withheld},
                      {"effect", opt(e.effect)},
                      {"ci_low", opt(e.ci_low)},
                      {"ci_high", opt(e.ci_high)}});
  }
  return {{"report", "micro_randomized"}, {"schema_version", 1}, {"decision_points", points}};
}

std::vector<PolicySweepRow> privacy_utility_sweep(const std::vector<model::LearnerContext>& contexts,
                                                  const std::vector<PolicyLevel>& levels, int turns,
                                                  const std::vector<std::uint64_t>& seeds,
                                                  const TrialConfig& config) {
  if (levels.empty()) throw Error(ErrorCode::kInvalidArgument, "the sweep needs at least one policy");
  std::vector<PolicySweepRow> rows;
  for (const auto& level : levels) {
    auto c = config;
    c.sim.serving.policy = level.policy;
    const auto arm = run_arm(contexts, {level.label, Condition::kContextAware}, turns, seeds, c);
    rows.push_back({level.label, arm.mean_outcome, arm.mean_alignment_rate, 0.0});
  }
  for (auto& r : rows) r.outcome_delta = r.mean_outcome - rows.front().mean_outcome;
  return rows;
}

nlohmann::json to_json(const std::vector<PolicySweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"label", r.label},
                   {"mean_outcome", r.mean_outcome},
                   {"mean_alignment_rate", r.mean_alignment_rate},
                   {"outcome_delta", r.outcome_delta}});
  }
  return {{"report", "privacy_utility_sweep"}, {"schema_version", 1}, {"levels", out}};
}

}  // namespace lc::sim
