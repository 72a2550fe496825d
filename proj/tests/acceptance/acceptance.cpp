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

// Acceptance suite: one PASS/FAIL line per criterion on stdout, exit status 1
// if any criterion fails. Usage: lc_acceptance [path-to-lc]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "conformance.h"
#include "generators.h"
#include "lc/common/digest.h"
#include "lc/common/error.h"
#include "lc/common/random.h"
#include "lc/model/json.h"
#include "lc/prioritize/distribution.h"
#include "lc/prioritize/salience.h"
#include "lc/privacy/audit.h"
#include "lc/privacy/budget.h"
#include "lc/protocol/snapshot.h"
#include "lc/sim/closed_loop.h"
#include "lc/sim/trial.h"
#include "lc/store/canonical.h"
#include "lc/store/merge.h"
#include "lc/temporal/bkt.h"
#include "lc/temporal/decay.h"

namespace {

using namespace lc;
using lc::testing::epoch;
using lc::testing::random_context;

// Collects failed checks; a criterion passes when none failed.
struct Checks {
  std::vector<std::string> failed;
  std::size_t count = 0;
  void expect(bool ok, const std::string& what) {
    ++count;
    if (!ok && failed.size() < 5) failed.push_back(what);
    else if (!ok) failed.push_back("");
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // 0: no runtime bound
  std::function<void(Checks&)> run;
};

std::string fmt(double x, int digits = 6) {
  std::ostringstream o;
  o.precision(digits);
  o << x;
  return o.str();
}

// ---- 1. TVD / LOO -----------------------------------------------------------

void tvd_and_salience(Checks& c) {
  Rng rng(101);
  const std::vector<std::string> labels = {"s0", "s1", "s2", "s3", "s4", "s5", "s6", "s7"};
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    std::map<std::string, double> p, q;
    std::vector<std::string> sp, sq;
    std::vector<double> cp, cq;
    for (const auto& l : labels) {
      if (rng.bernoulli(0.75)) { sp.push_back(l); cp.push_back(rng.uniform() + 1e-6); }
      if (rng.bernoulli(0.75)) { sq.push_back(l); cq.push_back(rng.uniform() + 1e-6); }
    }
    if (sp.empty()) { sp.push_back("s0"); cp.push_back(1); }
    if (sq.empty()) { sq.push_back("s1"); cq.push_back(1); }
    const auto dp = prioritize::Distribution::from_counts(sp, cp);
    const auto dq = prioritize::Distribution::from_counts(sq, cq);
    for (std::size_t k = 0; k < sp.size(); ++k) p[sp[k]] = dp.probs[k];
    for (std::size_t k = 0; k < sq.size(); ++k) q[sq[k]] = dq.probs[k];
    double oracle = 0;
    for (const auto& l : labels) {
      const double a = p.count(l) ? p[l] : 0.0;
      const double b = q.count(l) ? q[l] : 0.0;
      oracle += std::abs(a - b);
    }
    oracle /= 2;
    worst = std::max(worst, std::abs(prioritize::tvd(dp, dq) - oracle));
  }
  c.expect(worst <= 1e-12, "tvd deviates from the half-sum oracle by " + fmt(worst));

  const std::vector<std::string> strategies = {"guided practice", "worked examples", "foster growth mindset",
                                               "goal setting and monitoring"};
  using prioritize::Distribution;
  const auto full = Distribution::from_counts(strategies, {400, 300, 200, 100});
  const std::map<std::string, Distribution> variants = {
      {"perceived_value", Distribution::from_counts(strategies, {113, 300, 200, 387})},
      {"self_efficacy", Distribution::from_counts(strategies, {193, 300, 200, 307})},
      {"effort_regulation", Distribution::from_counts(strategies, {320, 300, 200, 180})},
      {"hobby_distractor", Distribution::from_counts(strategies, {127, 300, 200, 373})},
  };
  const auto impact = prioritize::loo_impact(full, variants);
  const std::map<std::string, double> expected = {
      {"perceived_value", 0.287}, {"self_efficacy", 0.207}, {"effort_regulation", 0.080}, {"hobby_distractor", 0.273}};
  for (const auto& [k, v] : expected) {
    const double got = impact.at(k);
    c.expect(std::round(got * 1000) == std::round(v * 1000) && std::abs(got - v) <= 1e-12,
             k + " impact " + fmt(got, 17) + " != " + fmt(v));
  }
  const auto report = prioritize::rank_misalignment(
      impact, {{"perceived_value", 1}, {"self_efficacy", 1}, {"effort_regulation", 1}, {"hobby_distractor", 0}});
  using prioritize::Misalignment;
  using prioritize::MisalignmentReason;
  c.expect(report.misaligned == std::vector<Misalignment>{{"effort_regulation", MisalignmentReason::kInvisibleTrait},
                                                          {"hobby_distractor", MisalignmentReason::kHallucinatedRelevance}},
           "misalignment flags: " + prioritize::to_json(report)["misaligned"].dump());
}

// ---- 2. BKT -----------------------------------------------------------------

double hmm_forward(double prior, bool correct, const temporal::BktParams& p) {
  const double emit[2] = {correct ? p.p_guess : 1 - p.p_guess, correct ? 1 - p.p_slip : p.p_slip};
  double alpha[2] = {(1 - prior) * emit[0], prior * emit[1]};
  const double z = alpha[0] + alpha[1];
  alpha[0] /= z;
  alpha[1] /= z;
  const double trans[2][2] = {{1 - p.p_transit, p.p_transit}, {0, 1}};
  return alpha[0] * trans[0][1] + alpha[1] * trans[1][1];
}

void bkt(Checks& c) {
  Rng rng(202);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    temporal::BktParams p{rng.uniform(), rng.uniform(), rng.uniform() * 0.499, rng.uniform() * 0.499};
    const double prior = rng.uniform();
    const bool correct = rng.bernoulli(0.5);
    worst = std::max(worst, std::abs(temporal::bkt_update(prior, correct, p) - hmm_forward(prior, correct, p)));
  }
  c.expect(worst <= 1e-12, "bkt deviates from the HMM forward pass by " + fmt(worst));
  for (int i = 0; i < 1000; ++i) {
    temporal::BktParams p{rng.uniform(), 0.0, rng.uniform() * 0.499, rng.uniform() * 0.499};
    double m = p.p_init;
    for (int k = 0; k < 25; ++k) {
      const double next = temporal::bkt_update(m, true, p);
      c.expect(next >= m, "mastery decreased after a correct answer at p_transit=0");
      m = next;
    }
  }
}

// ---- 3. Decay and smoothing ---------------------------------------------------

void decay_and_smoothing(Checks& c) {
  const model::DecayPolicy p{0.1, 0.05};
  c.expect(temporal::decay_weight(epoch(), epoch(), p) == 1.0, "decay_weight(0) != 1");
  // lambda = ln 2 per day, one day elapsed: exactly one half-life.
  const model::DecayPolicy half{std::log(2.0), 0.05};
  const double w = temporal::decay_weight(epoch(), epoch() + std::chrono::hours(24), half);
  c.expect(std::abs(w - 0.5) <= 1e-12, "half-life weight " + fmt(w, 17));
  c.expect(std::abs(std::exp(-std::log(2.0)) - 0.5) <= 1e-12, "exp(-ln 2) != 0.5");

  Rng rng(303);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::pair<Timestamp, double>> series;
    const auto n = rng.uniform_int(1, 50);
    for (int k = 0; k < n; ++k) series.emplace_back(epoch() + std::chrono::hours(k), rng.uniform() * 100 - 50);
    const double alpha = std::max(1e-9, rng.uniform());
    double hi = -1e300;
    for (const auto& [t, v] : series) hi = std::max(hi, v);
    for (const auto& [t, v] : temporal::smooth_series(series, alpha)) {
      c.expect(v <= hi, "smoothed value " + fmt(v) + " above input max " + fmt(hi));
    }
  }
}

// ---- 4. Canonical store -----------------------------------------------------

std::string content_without_version(const model::LearnerContext& ctx) {
  auto j = store::context_to_json(ctx);
  j.erase("version");
  return j.dump();
}

void canonical_store(Checks& c) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto ctx = random_context(seed);
    const auto bytes = store::canonical_serialize(ctx).bytes;
    c.expect(store::canonical_serialize(store::deserialize(bytes)).bytes == bytes,
             "byte identity fails for seed " + std::to_string(seed));
  }
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto base = random_context(seed);
    const auto a = lc::testing::diverge(base, 2 * seed + 1);
    const auto b = lc::testing::diverge(base, 2 * seed + 2);
    const auto ab = store::sync_merge(a, b).context;
    const auto ba = store::sync_merge(b, a).context;
    c.expect(store::content_hash(ab) == store::content_hash(ba), "merge not commutative, seed " + std::to_string(seed));
    c.expect(content_without_version(store::sync_merge(ab, ab).context) == content_without_version(ab) &&
                 content_without_version(store::sync_merge(ab, a).context) == content_without_version(ab),
             "merge not idempotent, seed " + std::to_string(seed));
    for (const auto* x : {&a, &b, &base}) {
      const auto copy = store::deserialize(store::canonical_serialize(*x).bytes);
      c.expect(store::content_hash(copy) == store::content_hash(*x), "copy hash differs");
      const auto r = store::sync_merge(*x, copy);
      c.expect(r.context == *x && r.local_changes.empty(), "equal hashes did not merge as a no-op");
    }
  }
}

// ---- 5. Privacy --------------------------------------------------------------

void privacy_suite(Checks& c) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    privacy::PrivacyBudget b{"l", 0.1 + rng.uniform() * 3.0, 0.0};
    for (int i = 0; i < 40; ++i) {
      const double q = rng.bernoulli(0.1) ? -rng.uniform() : rng.uniform() * 0.5;
      const auto before = b;
      try {
        b = privacy::charge_budget(b, q);
      } catch (const Error&) {
        c.expect(b == before, "denied charge changed the budget");
      }
      c.expect(b.epsilon_spent <= b.epsilon_total, "budget overspent");
    }
  }

  protocol::ServingConfig config;
  c.expect(config.policy.level_for(model::Sensitivity::kPii) == privacy::GranularityLevel::kRedact,
           "policy does not redact PII");
  std::size_t served = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto ctx = random_context(seed);
    std::vector<std::string> secrets;
    for (const auto& f : ctx.all_features()) {
      if (f.sensitivity == model::Sensitivity::kPii) secrets.push_back(model::value_text(f.value));
    }
    for (const auto purpose : {model::ConsentScope::kInstruction, model::ConsentScope::kResearch}) {
      protocol::SnapshotRequest req{ctx.learner_id(), purpose};
      req.budget = 1000;
      req.include_aggregates = true;
      privacy::PrivacyBudget budget{ctx.learner_id(), 10.0, 0.0};
      privacy::AuditChain audit;
      std::string out;
      try {
        out = protocol::to_json(protocol::build_snapshot(ctx, req, config, ctx.clock(), &budget, &audit)).dump();
        ++served;
      } catch (const Error& e) {
        c.expect(e.code() == ErrorCode::kEmptyAfterFiltering, "unexpected error " + std::string(e.what()));
      }
      for (const auto& r : audit.records()) out += privacy::to_json(r).dump();
      for (const auto& s : secrets) c.expect(out.find(s) == std::string::npos, "PII value leaked: " + s);
    }
  }
  c.expect(served > 1000, "too few snapshots served: " + std::to_string(served));

  privacy::AuditChain chain;
  Rng rng(505);
  for (int i = 0; i < 100; ++i) {
    chain.append({epoch() + std::chrono::seconds(i), "actor-" + std::to_string(rng.uniform_int(0, 5)),
                  static_cast<privacy::AuditAction>(rng.uniform_int(0, 5)),
                  {{"n", rng.uniform_int(0, 1 << 20)}}, ""});
  }
  c.expect(chain.verify().ok, "untampered chain fails verification");
  for (std::size_t i = 0; i < 100; ++i) {
    for (int field = 0; field < 5; ++field) {
      auto records = chain.records();
      auto& r = records[i];
      switch (field) {
        case 0: r.at += std::chrono::milliseconds(1 + rng.uniform_int(0, 1000)); break;
        case 1: r.actor += "'"; break;
        case 2:
          r.action = static_cast<privacy::AuditAction>((static_cast<int>(r.action) + 1 + rng.uniform_int(0, 4)) % 6);
          break;
        case 3: r.detail["n"] = r.detail["n"].get<std::int64_t>() + 1 + rng.uniform_int(0, 9); break;
        case 4: r.chain_hash[rng.uniform_int(0, 63)] ^= 0x01; break;
      }
      const auto v = privacy::verify_chain(records);
      c.expect(!v.ok && v.first_bad == i, "tampering of record " + std::to_string(i) + " field " +
                                              std::to_string(field) + " not detected");
    }
  }
}

// ---- 6. Protocol -------------------------------------------------------------

void protocol_suite(Checks& c, const std::string& lc_binary) {
  for (const auto t : {lc::testing::Transport::kStdio, lc::testing::Transport::kHttp}) {
    const auto name = t == lc::testing::Transport::kStdio ? "stdio" : "http";
    const auto r = lc::testing::run_protocol_conformance(lc_binary, t);
    for (const auto& f : r.failures) c.expect(false, std::string(name) + ": " + f);
    c.expect(r.requests >= 15, std::string(name) + ": only " + std::to_string(r.requests) + " requests");
  }
}

// ---- 7. Closed loop ----------------------------------------------------------

void closed_loop(Checks& c) {
  const int sat = sim::saturation_turns();
  for (const std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
    const auto report = sim::run_closed_loop(200, sat, seed);
    for (const auto& k : report.cases) {
      c.expect(k.result.overall == 1.0, "case seed " + std::to_string(k.seed) + " consistency " + fmt(k.result.overall));
    }
    const auto& sweep = report.length_sweep;
    for (auto it = sweep.begin(); it != sweep.end(); ++it) {
      const auto& acc = it->second;
      c.expect(acc.at("anxiety") >= acc.at("conscientiousness") &&
                   acc.at("conscientiousness") >= acc.at("language_proficiency"),
               "ordering violated at " + std::to_string(it->first) + " turns");
      if (it != sweep.begin()) {
        for (const auto& [attr, a] : acc) {
          c.expect(a >= std::prev(it)->second.at(attr),
                   attr + " accuracy dropped at " + std::to_string(it->first) + " turns");
        }
      }
    }
    // The truncated sweep must actually expose the gap somewhere.
    c.expect(sweep.begin()->second.at("language_proficiency") < 1.0, "no observability gap at the shortest length");
  }

  std::vector<sim::ConsistencyResult> fixture;
  for (int i = 0; i < 35; ++i) {
    sim::ConsistencyResult r;
    r.per_attribute = {{"misconception", i < 32}, {"anxiety", true}, {"conscientiousness", i < 24},
                       {"language_proficiency", i < 21}};
    fixture.push_back(r);
  }
  const auto rates = sim::aggregate_consistency(fixture);
  const std::map<std::string, double> expected = {
      {"misconception", 91.4}, {"anxiety", 100.0}, {"conscientiousness", 68.6}, {"language_proficiency", 60.0}};
  for (const auto& [attr, pct] : expected) {
    c.expect(rates.at(attr).percent() == pct, attr + " " + fmt(rates.at(attr).percent()) + "% != " + fmt(pct) + "%");
  }
}

// ---- 8. Trial harness ---------------------------------------------------------

std::vector<model::LearnerContext> reference_contexts(int n, std::uint64_t seed) {
  std::vector<model::LearnerContext> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(sim::context_for("learner-" + std::to_string(i),
                                   sim::random_beliefs(derive_seed(seed, {static_cast<std::uint64_t>(i)})), epoch()));
  }
  return out;
}

void trial(Checks& c) {
  const auto contexts = reference_contexts(40, 8);
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};  // 40 x 5 = 200 runs per arm

  const auto same = sim::warmstart_trial(
      contexts, {{"a", sim::Condition::kContextBlind}, {"b", sim::Condition::kContextBlind}}, 10, seeds);
  c.expect(same.arms[0].runs.size() == 200, "identical arms: n != 200");
  c.expect(same.cohens_d && std::abs(*same.cohens_d) < 0.05,
           "identical arms: d = " + (same.cohens_d ? fmt(*same.cohens_d) : std::string("null")));

  const auto warm = sim::warmstart_trial(
      contexts, {{"aware", sim::Condition::kContextAware}, {"blind", sim::Condition::kContextBlind}}, 10, seeds);
  for (const auto& r : warm.arms[0].runs) c.expect(r.time_to_alignment == 1, "aware run not aligned at turn 1");
  for (const auto& r : warm.arms[1].runs) c.expect(r.time_to_alignment == 4, "blind run not aligned at turn 4");
  c.expect(warm.cohens_d && *warm.cohens_d >= 0.20 && warm.meets_effect_threshold,
           "warm-start d = " + (warm.cohens_d ? fmt(*warm.cohens_d) : std::string("null")));

  sim::TrialConfig null_config;
  null_config.outcome.aligned_delta = 0.0;
  sim::TrialPlan plan;
  plan.decision_points = 5;
  plan.injection_schedule.assign(5, true);
  plan.seed = 7;
  plan.replicates = 25;
  for (const auto& e : sim::micro_randomized_run(plan, contexts, null_config)) {
    c.expect(e.effect && *e.ci_low <= 0.0 && 0.0 <= *e.ci_high,
             "point " + std::to_string(e.point) + ": effect " + (e.effect ? fmt(*e.effect) : "null") + " CI [" +
                 (e.ci_low ? fmt(*e.ci_low) : "") + ", " + (e.ci_high ? fmt(*e.ci_high) : "") + "] excludes 0");
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string lc_binary = argc > 1 ? argv[1] : LC_BINARY;
  const std::vector<Criterion> criteria = {
      {1, "TVD/LOO oracle and salience replay", 5, tvd_and_salience},
      {2, "BKT oracle and monotonicity", 5, bkt},
      {3, "decay and smoothing", 0, decay_and_smoothing},
      {4, "canonical store round trip and merge properties", 30, canonical_store},
      {5, "privacy budget, PII redaction, audit tamper detection", 0, privacy_suite},
      {6, "protocol conformance over stdio and HTTP", 0, [&](Checks& c) { protocol_suite(c, lc_binary); }},
      {7, "closed-loop consistency and observability gap", 60, closed_loop},
      {8, "trial harness effect sizes", 0, trial},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    Checks checks;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(checks);
    } catch (const std::exception& e) {
      checks.failed.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.limit_seconds > 0 && secs >= cr.limit_seconds) {
      checks.failed.push_back("runtime " + fmt(secs, 3) + " s over the " + fmt(cr.limit_seconds) + " s bound");
    }
    const bool ok = checks.failed.empty();
    failures += !ok;
    std::string detail;
    if (!ok) {
      std::size_t shown = 0;
      for (const auto& f : checks.failed) {
        if (f.empty() || shown == 3) continue;
        detail += (shown++ ? "; " : " -- ") + f;
      }
      detail += " (" + std::to_string(checks.failed.size()) + " failed)";
    }
    std::printf("[%s] %d %s (%zu checks, %.2f s)%s\n", ok ? "PASS" : "FAIL", cr.id, cr.name.c_str(), checks.count,
                secs, detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
