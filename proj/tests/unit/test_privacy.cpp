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

#include <doctest.h>

#include "generators.h"
#include "lc/common/digest.h"
#include "lc/common/error.h"
#include "lc/common/random.h"
#include "lc/model/json.h"
#include "lc/privacy/audit.h"
#include "lc/privacy/blur.h"
#include "lc/privacy/budget.h"
#include "lc/privacy/policy.h"

using namespace lc;
using namespace lc::privacy;
using lc::testing::epoch;
using lc::testing::make_feature;
using model::ConsentScope;
using model::Sensitivity;

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

std::string text_of(const model::Value& v) { return model::value_text(v); }

}  // namespace

TEST_CASE("blur levels") {
  using model::Integer;
  using model::Probability;
  using model::Real;
  using model::Text;
  const model::Value p = Probability{0.83};
  CHECK(blur_value(p, GranularityLevel::kExact) == p);
  CHECK(blur_value(p, GranularityLevel::kCoarse) == model::Value{Probability{0.8}});
  CHECK(blur_value(p, GranularityLevel::kCategory) == model::Value{model::Categorical{"high"}});
  CHECK(blur_value(p, GranularityLevel::kRedact) == model::Value{Text{"REDACTED"}});

  CHECK(blur_value(Integer{16}, GranularityLevel::kCoarse) == model::Value{model::Categorical{"[13-18]"}});
  CHECK(blur_value(Integer{40}, GranularityLevel::kCoarse) == model::Value{model::Categorical{"[26+]"}});
  CHECK(blur_value(Real{0.1}, GranularityLevel::kCategory) == model::Value{model::Categorical{"low"}});
  CHECK(blur_value(Text{"Maya"}, GranularityLevel::kCategory) == model::Value{Text{"Maya"}});
  CHECK(blur_value(Text{"Maya"}, GranularityLevel::kRedact) == model::Value{Text{"REDACTED"}});
}

TEST_CASE("each blur level is a function of the previous one") {
  // If two values agree at level g they agree at every coarser level.
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const model::Value a = model::Probability{rng.uniform()};
    const model::Value b = model::Probability{rng.uniform()};
    for (int g = 0; g < 3; ++g) {
      const auto lg = static_cast<GranularityLevel>(g);
      const auto ln = static_cast<GranularityLevel>(g + 1);
      if (blur_value(a, lg) == blur_value(b, lg)) CHECK(blur_value(a, ln) == blur_value(b, ln));
    }
    const model::Value x = model::Integer{rng.uniform_int(0, 60)};
    const model::Value y = model::Integer{rng.uniform_int(0, 60)};
    if (blur_value(x, GranularityLevel::kCoarse) == blur_value(y, GranularityLevel::kCoarse)) {
      CHECK(blur_value(x, GranularityLevel::kCategory) == blur_value(y, GranularityLevel::kCategory));
    }
  }
}

TEST_CASE("budget charging") {
  PrivacyBudget b{"l", 1.0, 0.0};
  b = charge_budget(b, 0.4);
  CHECK(b.epsilon_spent == doctest::Approx(0.4));
  CHECK(code_of([&] { charge_budget(b, 0.0); }) == ErrorCode::kNonPositiveEpsilon);
  CHECK(code_of([&] { charge_budget(b, 0.7); }) == ErrorCode::kBudgetExhausted);
  b = charge_budget(b, 0.6);
  CHECK(b.remaining() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("budget safety over random charge sequences") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    PrivacyBudget b{"l", 0.5 + rng.uniform() * 2.0, 0.0};
    for (int i = 0; i < 30; ++i) {
      const double q = rng.uniform() < 0.1 ? -rng.uniform() : rng.uniform() * 0.4;
      const auto before = b;
      try {
        b = charge_budget(b, q);
        CHECK(q > 0);
      } catch (const Error&) {
        CHECK(b == before);
      }
      CHECK(b.epsilon_spent <= b.epsilon_total);
    }
  }
}

TEST_CASE("laplace noise") {
  CHECK(laplace_scale_for_count(0.5) == 2.0);
  CHECK(dp_noisy_count(10, 0.1, 42) == dp_noisy_count(10, 0.1, 42));
  LaplaceNoise noise(2.0, 7);
  const int n = 200000;
  double sum = 0, abs_sum = 0;
  for (int i = 0; i < n; ++i) {
    const double x = noise.sample();
    sum += x;
    abs_sum += std::abs(x);
  }
  // E|X| = b for Laplace(0, b).
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.03).scale(2.0));
  CHECK(abs_sum / n == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("policy rules") {
  DisclosurePolicy p;
  CHECK_NOTHROW(check_policy(p));
  p.max_granularity[Sensitivity::kPii] = GranularityLevel::kExact;
  CHECK(code_of([&] { check_policy(p); }) == ErrorCode::kInvalidPolicy);

  DisclosurePolicy q;
  q.deny_keys = {"who.affect.*"};
  const auto back = policy_from_json(to_json(q));
  CHECK(back.deny_keys == q.deny_keys);
  CHECK(back.max_granularity == q.max_granularity);
  CHECK(key_matches("who.affect.*", "who.affect.anxiety"));
  CHECK_FALSE(key_matches("who.affect.*", "who.trait.grit"));
  CHECK(key_matches("what.?", "what.x"));
}

TEST_CASE("authorize_query") {
  auto ctx = model::new_context("l", epoch());
  ctx.set_feature(make_feature("who.affect.anxiety", model::Probability{0.8}, epoch()));
  ctx.set_feature(make_feature("who.name", model::Text{"Maya"}, epoch(), model::FeatureKind::kState,
                               Sensitivity::kPii));
  ctx.set_feature(make_feature("what.research_only", model::Real{1}, epoch(), model::FeatureKind::kState,
                               Sensitivity::kNone, ConsentScope::kResearch));
  ctx.set_feature(make_feature("what.no_consent", model::Real{1}, epoch(), model::FeatureKind::kState,
                               Sensitivity::kNone, ConsentScope::kNone));
  auto expired = make_feature("when.old", model::Real{1}, epoch());
  expired.provenance.retention_until = epoch() + std::chrono::hours(1);
  ctx.set_feature(expired);
  ctx.set_feature(make_feature("where.hobby", model::Text{"chess"}, epoch()));

  DisclosurePolicy policy;
  policy.deny_keys = {"where.*"};
  AuditChain audit;
  const auto now = epoch() + std::chrono::hours(2);
  const auto a = authorize_query(policy, ConsentScope::kInstruction,
                                 {"who.affect.anxiety", "who.name", "what.research_only",
                                  "what.no_consent", "when.old", "where.hobby", "who.ghost"},
                                 ctx, now, &audit);
  REQUIRE(a.allowed.size() == 2);
  CHECK(a.allowed[0] == std::pair<std::string, GranularityLevel>{"who.affect.anxiety", GranularityLevel::kExact});
  CHECK(a.allowed[1] == std::pair<std::string, GranularityLevel>{"who.name", GranularityLevel::kRedact});
  std::map<std::string, DenialReason> reasons;
  for (const auto& d : a.denied) reasons[d.key] = d.reason;
  CHECK(reasons.at("what.research_only") == DenialReason::kScopeIncompatible);
  CHECK(reasons.at("what.no_consent") == DenialReason::kNoConsent);
  CHECK(reasons.at("when.old") == DenialReason::kRetentionExpired);
  CHECK(reasons.at("where.hobby") == DenialReason::kDenyPattern);
  CHECK(reasons.at("who.ghost") == DenialReason::kUnknownKey);
  CHECK(audit.size() == a.denied.size());
  for (const auto& r : audit.records()) CHECK(r.action == AuditAction::kQueryDenied);

  DisclosurePolicy instruction_only;
  instruction_only.allowed_purposes = {ConsentScope::kInstruction};
  const auto b = authorize_query(instruction_only, ConsentScope::kResearch, {"what.research_only"}, ctx, now);
  REQUIRE(b.denied.size() == 1);
  CHECK(b.denied[0].reason == DenialReason::kPurposeNotAllowed);
}

TEST_CASE("audit chain") {
  AuditChain chain;
  for (int i = 0; i < 5; ++i) {
    chain.append({epoch() + std::chrono::seconds(i), "lc", AuditAction::kSnapshotServed, {{"i", i}}, ""});
  }
  CHECK(chain.verify().ok);
  // Independent recomputation of the first link.
  const auto& r0 = chain.records()[0];
  std::string prefix;
  for (std::size_t i = 0; i < 32; ++i) prefix.push_back('\0');
  CHECK(r0.chain_hash == sha256_hex(prefix + record_body(r0)));
  CHECK(chain.records()[1].chain_hash == chain_hash(r0.chain_hash, chain.records()[1]));
  CHECK(audit_record_from_json(to_json(r0)) == r0);
}

TEST_CASE("audit chain detects every single-record tampering") {
  AuditChain chain;
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    chain.append({epoch() + std::chrono::seconds(i), "actor" + std::to_string(rng.uniform_int(0, 3)),
                  static_cast<AuditAction>(rng.uniform_int(0, 5)), {{"n", rng.uniform_int(0, 1000)}}, ""});
  }
  REQUIRE(chain.verify().ok);
  for (std::size_t i = 0; i < 100; ++i) {
    for (int field = 0; field < 5; ++field) {
      auto records = chain.records();
      auto& r = records[i];
      switch (field) {
        case 0: r.at += std::chrono::milliseconds(1); break;
        case 1: r.actor += "x"; break;
        case 2: r.action = r.action == AuditAction::kQueryDenied ? AuditAction::kSnapshotServed : AuditAction::kQueryDenied; break;
        case 3: r.detail["n"] = r.detail["n"].get<int>() + 1; break;
        case 4: r.chain_hash[0] = r.chain_hash[0] == 'a' ? 'b' : 'a'; break;
      }
      const auto v = verify_chain(records);
      CHECK_FALSE(v.ok);
      CHECK(v.first_bad == i);
    }
  }
}
