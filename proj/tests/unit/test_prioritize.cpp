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

#include <cmath>
#include <functional>
#include <map>

#include <doctest.h>

#include "generators.h"
#include "lc/common/error.h"
#include "lc/common/random.h"
#include "lc/prioritize/distribution.h"
#include "lc/prioritize/information.h"
#include "lc/prioritize/salience.h"
#include "lc/prioritize/selection.h"

using namespace lc;
using namespace lc::prioritize;
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

double half_sum(const std::map<std::string, double>& p, const std::map<std::string, double>& q) {
  std::map<std::string, std::pair<double, double>> u;
  for (const auto& [k, v] : p) u[k].first = v;
  for (const auto& [k, v] : q) u[k].second = v;
  double s = 0;
  for (const auto& [k, pq] : u) s += std::abs(pq.first - pq.second);
  return s / 2;
}

// I(X;Y) = sum p(x,y) log2(p(x,y) / (p(x) p(y))), from counts.
double mi_oracle(const std::vector<std::pair<std::string, std::string>>& s) {
  std::map<std::pair<std::string, std::string>, double> joint;
  std::map<std::string, double> px, py;
  for (const auto& xy : s) {
    joint[xy] += 1;
    px[xy.first] += 1;
    py[xy.second] += 1;
  }
  const double n = static_cast<double>(s.size());
  double mi = 0;
  for (const auto& [xy, c] : joint) {
    mi += c / n * std::log2((c / n) / ((px[xy.first] / n) * (py[xy.second] / n)));
  }
  return mi;
}

}  // namespace

TEST_CASE("tvd matches the half-sum oracle") {
  Rng rng(1);
  const std::vector<std::string> labels = {"a", "b", "c", "d", "e", "f"};
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::string> sp, sq;
    std::vector<double> cp, cq;
    for (const auto& l : labels) {
      if (rng.bernoulli(0.8)) { sp.push_back(l); cp.push_back(rng.uniform() + 1e-3); }
      if (rng.bernoulli(0.8)) { sq.push_back(l); cq.push_back(rng.uniform() + 1e-3); }
    }
    if (sp.empty() || sq.empty()) continue;
    const auto p = Distribution::from_counts(sp, cp);
    const auto q = Distribution::from_counts(sq, cq);
    std::map<std::string, double> mp, mq;
    for (std::size_t k = 0; k < sp.size(); ++k) mp[sp[k]] = p.probs[k];
    for (std::size_t k = 0; k < sq.size(); ++k) mq[sq[k]] = q.probs[k];
    const double d = tvd(p, q);
    CHECK(std::abs(d - half_sum(mp, mq)) <= 1e-12);
    CHECK(d >= 0);
    CHECK(d <= 1 + 1e-12);
    CHECK(std::abs(d - tvd(q, p)) <= 1e-15);
  }
}

TEST_CASE("distribution checks") {
  CHECK(code_of([] { check_distribution({{"a", "b"}, {0.5}}); }) == ErrorCode::kInvalidDistribution);
  CHECK(code_of([] { check_distribution({{"a", "a"}, {0.5, 0.5}}); }) == ErrorCode::kInvalidDistribution);
  CHECK(code_of([] { check_distribution({{"a", "b"}, {0.5, 0.6}}); }) == ErrorCode::kInvalidDistribution);
  CHECK(code_of([] { check_distribution({{"a", "b"}, {1.5, -0.5}}); }) == ErrorCode::kInvalidDistribution);
  const Distribution d{{"a", "b"}, {0.25, 0.75}};
  CHECK(tvd(d, d) == 0.0);
  const auto back = distribution_from_json(to_json(d));
  CHECK(back.support == d.support);
  CHECK(back.probs == d.probs);
}

TEST_CASE("mutual information") {
  CHECK(code_of([] { mutual_information({}); }) == ErrorCode::kEmptySamples);
  CHECK(mutual_information({{"a", "x"}, {"b", "y"}}) == doctest::Approx(1.0));
  CHECK(mutual_information({{"a", "x"}, {"a", "y"}}) == doctest::Approx(0.0));
  CHECK(entropy({"a", "b", "c", "d"}) == doctest::Approx(2.0));

  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::pair<std::string, std::string>> s;
    const auto n = rng.uniform_int(1, 60);
    for (int k = 0; k < n; ++k) {
      s.emplace_back(std::to_string(rng.uniform_int(0, 3)), std::to_string(rng.uniform_int(0, 2)));
    }
    const double mi = mutual_information(s);
    CHECK(mi == doctest::Approx(mi_oracle(s)).epsilon(1e-12));
    CHECK(mi >= -1e-12);
    std::vector<std::string> xs;
    for (const auto& [x, _] : s) xs.push_back(x);
    CHECK(mi <= entropy(xs) + 1e-12);
  }
}

TEST_CASE("equal-width binning") {
  const std::vector<double> v = {0.0, 0.19, 0.2, 0.5, 1.0};
  CHECK(discretize_equal_width(v, 5) == std::vector<std::string>{"bin0", "bin0", "bin1", "bin2", "bin4"});
  const std::vector<double> flat = {3.0, 3.0};
  CHECK(discretize_equal_width(flat, 5) == std::vector<std::string>{"bin0", "bin0"});
}

TEST_CASE("leave-one-out salience on the strategy fixture") {
  const std::vector<std::string> strategies = {"guided practice", "worked examples", "foster growth mindset",
                                               "goal setting and monitoring"};
  const auto full = Distribution::from_counts(strategies, {400, 300, 200, 100});
  const std::map<std::string, Distribution> variants = {
      {"perceived_value", Distribution::from_counts(strategies, {113, 300, 200, 387})},
      {"self_efficacy", Distribution::from_counts(strategies, {193, 300, 200, 307})},
      {"effort_regulation", Distribution::from_counts(strategies, {320, 300, 200, 180})},
      {"hobby_distractor", Distribution::from_counts(strategies, {127, 300, 200, 373})},
  };
  const auto impact = loo_impact(full, variants);
  CHECK(impact.at("perceived_value") == doctest::Approx(0.287).epsilon(1e-12));
  CHECK(impact.at("self_efficacy") == doctest::Approx(0.207).epsilon(1e-12));
  CHECK(impact.at("effort_regulation") == doctest::Approx(0.080).epsilon(1e-12));
  CHECK(impact.at("hobby_distractor") == doctest::Approx(0.273).epsilon(1e-12));

  const std::map<std::string, double> relevance = {
      {"perceived_value", 1}, {"self_efficacy", 1}, {"effort_regulation", 1}, {"hobby_distractor", 0}};
  const auto report = rank_misalignment(impact, relevance);
  CHECK(report.misaligned == std::vector<Misalignment>{
                                 {"effort_regulation", MisalignmentReason::kInvisibleTrait},
                                 {"hobby_distractor", MisalignmentReason::kHallucinatedRelevance}});
  CHECK(code_of([&] { rank_misalignment(impact, {{"perceived_value", 1}}); }) == ErrorCode::kMissingRelevance);
}

TEST_CASE("select_features") {
  auto ctx = model::new_context("l", epoch());
  ctx.upsert_node({"quadratics", model::NodeKind::kSkill, model::Dimension::kWhat, {}, {}});
  ctx.set_feature(make_feature("who.affect.anxiety", model::Probability{0.8}, epoch()));
  ctx.set_feature(make_feature("what.quadratics", model::Probability{0.4}, epoch()));
  auto old = make_feature("where.device", model::Categorical{"tablet"}, epoch());
  ctx.set_feature(old);
  const auto now = epoch() + std::chrono::hours(24);

  CHECK(code_of([&] { select_features(ctx, {}, 0, Task::kGeneric, now); }) == ErrorCode::kInvalidBudget);
  const auto w = select_features(ctx, {}, 1, Task::kFormativeFeedback, now);
  REQUIRE(w.features.size() == 1);
  CHECK(w.features[0].key == "who.affect.anxiety");

  // Outcome samples: a feature whose value carries no information drops out.
  OutcomeSamples samples;
  samples["what.quadratics"] = {{std::string("x"), "pass"}, {std::string("x"), "fail"}};
  const auto g = select_features(ctx, samples, 3, Task::kGeneric, now);
  REQUIRE(g.features.size() == 3);
  CHECK(g.features.back().key == "what.quadratics");
  CHECK(g.features.back().score == 0.0);
  CHECK(g.nodes.contains("l"));
  CHECK(g.nodes.contains("quadratics"));

  const auto none = [&] {
    select_features(ctx, {}, 2, Task::kGeneric, now, {}, [](const model::Feature&) { return false; });
  };
  CHECK(code_of(none) == ErrorCode::kNoFeatures);
}

TEST_CASE("selection respects the budget and ordering on random contexts") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto ctx = lc::testing::random_context(seed);
    if (ctx.feature_count() == 0) continue;
    const int budget = static_cast<int>(seed % 5) + 1;
    const auto w = select_features(ctx, {}, budget, Task::kGeneric, ctx.clock());
    CHECK(w.features.size() == std::min<std::size_t>(budget, ctx.feature_count()));
    for (std::size_t i = 1; i < w.features.size(); ++i) {
      CHECK(w.features[i - 1].score >= w.features[i].score);
    }
    for (const auto& e : w.edges) {
      CHECK(w.nodes.contains(e.src));
      CHECK(w.nodes.contains(e.dst));
    }
  }
}
