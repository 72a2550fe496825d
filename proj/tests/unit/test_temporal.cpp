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

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <doctest.h>

#include "generators.h"
#include "lc/common/error.h"
#include "lc/common/random.h"
#include "lc/privacy/audit.h"
#include "lc/temporal/bkt.h"
#include "lc/temporal/decay.h"
#include "lc/temporal/evidence.h"

using namespace lc;
using namespace lc::temporal;
using lc::testing::epoch;
using lc::testing::make_feature;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an lc::Error");
  return ErrorCode::kInvalidArgument;
}

// Forward pass of the two-state HMM over hidden states {unlearned, learned},
// written out as a joint table rather than the closed-form posterior.
double hmm_forward(double prior, bool correct, const BktParams& p) {
  const double emit[2] = {correct ? p.p_guess : 1 - p.p_guess, correct ? 1 - p.p_slip : p.p_slip};
  const double belief[2] = {1 - prior, prior};
  const double trans[2][2] = {{1 - p.p_transit, p.p_transit}, {0.0, 1.0}};
  double joint[2] = {belief[0] * emit[0], belief[1] * emit[1]};
  const double z = joint[0] + joint[1];
  joint[0] /= z;
  joint[1] /= z;
  double next[2] = {0, 0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) next[j] += joint[i] * trans[i][j];
  return next[1];
}

}  // namespace

TEST_CASE("bkt worked example") {
  // Posterior after a correct answer from 0.5 with slip 0.1, guess 0.3:
  // 0.45 / 0.6 = 0.75; then 0.75 + 0.25 * 0.1.
  const BktParams p{0.3, 0.1, 0.1, 0.3};
  CHECK(bkt_update(0.5, true, p) == doctest::Approx(0.775).epsilon(1e-12));
}

TEST_CASE("bkt matches the HMM forward pass") {
  Rng rng(2026);
  for (int i = 0; i < 10000; ++i) {
    BktParams p;
    p.p_init = rng.uniform();
    p.p_transit = rng.uniform();
    p.p_slip = rng.uniform() * 0.49;
    p.p_guess = rng.uniform() * 0.49;
    const double prior = rng.uniform();
    const bool correct = rng.bernoulli(0.5);
    CHECK(std::abs(bkt_update(prior, correct, p) - hmm_forward(prior, correct, p)) <= 1e-12);
  }
}

TEST_CASE("bkt monotone under correct answers without learning") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    BktParams p{rng.uniform(), 0.0, rng.uniform() * 0.49, rng.uniform() * 0.49};
    double m = p.p_init;
    for (int k = 0; k < 20; ++k) {
      const double next = bkt_update(m, true, p);
      CHECK(next >= m);
      CHECK(next <= 1.0);
      m = next;
    }
  }
}

TEST_CASE("bkt parameter checks") {
  CHECK(code_of([] { check_params({0.3, 0.1, 0.6, 0.5}); }) == ErrorCode::kInvalidParams);
  CHECK(code_of([] { check_params({1.3, 0.1, 0.1, 0.2}); }) == ErrorCode::kInvalidParams);
  CHECK_NOTHROW(check_params({}));
}

TEST_CASE("decay") {
  const model::DecayPolicy p{0.1, 0.05};
  CHECK(decay_weight(epoch(), epoch(), p) == 1.0);
  const double half_life = std::log(2.0) / p.lambda;
  CHECK(std::abs(decay_weight(epoch(), epoch() + std::chrono::milliseconds(static_cast<std::int64_t>(
                                                     std::llround(half_life * 86'400'000.0))),
                              p) -
                 0.5) < 1e-9);
  CHECK(std::abs(std::exp(-std::log(2.0)) - 0.5) <= 1e-12);
  CHECK(code_of([&] { decay_weight(epoch(), epoch() - std::chrono::hours(1), p); }) ==
        ErrorCode::kNegativeElapsed);

  auto f = make_feature("who.affect.anxiety", model::Probability{0.7}, epoch());
  f.confidence = 0.8;
  const auto ten_days = epoch() + std::chrono::hours(240);
  CHECK(effective_weight(f, ten_days) == doctest::Approx(0.8 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(effective_weight(f, epoch() - std::chrono::hours(1)) == doctest::Approx(0.8));
}

TEST_CASE("smoothing") {
  const auto t = [](int d) { return epoch() + std::chrono::hours(24 * d); };
  const auto s = smooth_series({{t(0), 1.0}, {t(1), 0.0}, {t(2), 1.0}}, 0.5);
  REQUIRE(s.size() == 3);
  CHECK(s[0].second == 1.0);
  CHECK(s[1].second == 0.5);
  CHECK(s[2].second == 0.75);
  CHECK(code_of([&] { smooth_series({{t(1), 1.0}, {t(0), 1.0}}, 0.5); }) ==
        ErrorCode::kNonMonotoneTimestamps);
  CHECK(code_of([&] { smooth_series({{t(0), 1.0}}, 0.0); }) == ErrorCode::kAlphaOutOfRange);
  CHECK(smooth_series({}, 0.5).empty());

  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::pair<Timestamp, double>> series;
    const auto n = rng.uniform_int(1, 40);
    for (int k = 0; k < n; ++k) series.emplace_back(t(k), rng.uniform() * 200 - 100);
    const double alpha = 1e-6 + rng.uniform() * (1 - 1e-6);
    const auto out = smooth_series(series, alpha);
    double hi = -1e300, lo = 1e300;
    for (const auto& [_, v] : series) {
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    for (const auto& [_, v] : out) {
      CHECK(v <= hi);
      CHECK(v >= lo);
    }
  }
}

TEST_CASE("adaptive forgetting") {
  auto ctx = model::new_context("l", epoch());
  ctx.set_feature(make_feature("who.affect.anxiety", model::Probability{0.7}, epoch()));
  auto trait = make_feature("who.trait.grit", model::Probability{0.6}, epoch(), model::FeatureKind::kTrait);
  trait.decay.lambda = 0.005;
  trait.confidence = 0.6;
  ctx.set_feature(trait);

  privacy::AuditChain audit;
  // exp(-0.1 * 29) = 0.055 > 0.05; exp(-0.1 * 31) = 0.045.
  CHECK(prune_forgotten(ctx, epoch() + std::chrono::hours(24 * 29), &audit).empty());
  CHECK(prune_forgotten(ctx, epoch() + std::chrono::hours(24 * 31), &audit) ==
        std::vector<std::string>{"who.affect.anxiety"});
  CHECK(audit.size() == 1);
  CHECK(audit.records()[0].action == privacy::AuditAction::kFeaturePruned);

  // Trait: exp(-0.005 * d) * 0.6 < 0.05 at d > 497.
  const auto t1 = epoch() + std::chrono::hours(24 * 500);
  CHECK(prune_forgotten(ctx, t1).empty());
  const auto* demoted = ctx.find_feature("who.trait.grit");
  REQUIRE(demoted);
  CHECK(demoted->confidence == doctest::Approx(0.3));
  CHECK(demoted->demoted_at == t1);
  CHECK(prune_forgotten(ctx, t1 + std::chrono::hours(24)) == std::vector<std::string>{"who.trait.grit"});
}

TEST_CASE("ingest answers and surveys") {
  auto ctx = model::new_context("l", epoch());
  model::ContextNode skill{"quadratics", model::NodeKind::kSkill, model::Dimension::kWhat, {}, {}};
  ctx.upsert_node(skill);
  IngestOptions opt;
  opt.now = epoch() + std::chrono::hours(1);
  opt.bkt = {0.3, 0.1, 0.1, 0.2};

  const auto v0 = ctx.version();
  ingest_evidence(ctx, {"l", epoch(), model::EvidenceKind::kAnswer, "quadratics", {{"correct", true}, {"item_id", "q1"}}},
                  opt);
  CHECK(ctx.version() == v0 + 1);
  const auto* m = ctx.find_feature(mastery_key("quadratics"));
  REQUIRE(m);
  // 0.27 / (0.27 + 0.14) then + (1 - post) * 0.1.
  const double post = 0.27 / 0.41;
  CHECK(std::get<model::Probability>(m->value).value == doctest::Approx(post + (1 - post) * 0.1).epsilon(1e-12));

  ingest_evidence(ctx,
                  {"l", epoch(), model::EvidenceKind::kSurveyItem, "who.motivation.perceived_value",
                   {{"instrument", "MSLQ"}, {"response", 5}, {"scale_min", 1}, {"scale_max", 7}}},
                  opt);
  const auto* s = ctx.find_feature("who.motivation.perceived_value");
  REQUIRE(s);
  CHECK(std::get<model::Probability>(s->value).value == doctest::Approx(4.0 / 6.0));

  ingest_evidence(ctx, {"l", epoch(), model::EvidenceKind::kPlatformEvent, "l", {{"name", "login"}}}, opt);
  CHECK(ctx.evidence_log().size() == 1);

  const auto before = ctx;
  CHECK(code_of([&] {
          ingest_evidence(ctx, {"other", epoch(), model::EvidenceKind::kPlatformEvent, "l", {}}, opt);
        }) == ErrorCode::kLearnerMismatch);
  CHECK(code_of([&] {
          ingest_evidence(ctx, {"l", epoch(), model::EvidenceKind::kAnswer, "nowhere", {{"correct", true}}}, opt);
        }) == ErrorCode::kUnresolvableTarget);
  CHECK(code_of([&] {
          ingest_evidence(ctx, {"l", epoch(), model::EvidenceKind::kAnswer, "quadratics", {{"correct", "yes"}}}, opt);
        }) == ErrorCode::kInvalidEvent);
  CHECK(code_of([&] {
          ingest_evidence(ctx,
                          {"l", opt.now + std::chrono::hours(1), model::EvidenceKind::kPlatformEvent, "l", {}}, opt);
        }) == ErrorCode::kInvalidEvent);
  CHECK(ctx == before);
}

TEST_CASE("stale events") {
  auto ctx = model::new_context("l", epoch());
  auto f = make_feature("who.affect.anxiety", model::Probability{0.5}, epoch());
  f.provenance.retention_until = epoch() + std::chrono::hours(1);
  ctx.set_feature(f);
  IngestOptions opt;
  opt.now = epoch() + std::chrono::hours(5);
  CHECK(code_of([&] {
          ingest_evidence(ctx,
                          {"l", epoch() + std::chrono::hours(2), model::EvidenceKind::kSurveyItem,
                           "who.affect.anxiety", {{"instrument", "x"}, {"response", 1}, {"scale_max", 2}}},
                          opt);
        }) == ErrorCode::kStaleEvent);
}

TEST_CASE("jsonl reader") {
  std::istringstream in(
      R"({"learner_id":"l","at":"2026-01-01T00:00:00Z","kind":"platform_event","target":"l","payload":{}})"
      "\n\n"
      R"({"learner_id":"l","at":"bad","kind":"answer","target":"l","payload":{}})"
      "\n");
  try {
    read_evidence_jsonl(in);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}
