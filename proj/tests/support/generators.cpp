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

#include "generators.h"

#include <array>
#include <vector>

namespace lc::testing {

namespace {

using model::ConsentScope;
using model::Dimension;
using model::Feature;
using model::FeatureKind;
using model::NodeKind;
using model::Sensitivity;

constexpr std::array<const char*, 6> kWords = {"alpha", "fractions", "café", "日本語", "zeta", "x y"};

Timestamp jitter(Rng& rng, Timestamp base, std::int64_t max_ms) {
  return base + std::chrono::milliseconds(rng.uniform_int(0, max_ms));
}

model::Value random_value(Rng& rng, Sensitivity s, std::uint64_t salt) {
  if (s == Sensitivity::kPii) {
    return model::Text{"pii-" + std::to_string(rng.next() ^ salt)};
  }
  switch (rng.uniform_int(0, 4)) {
    case 0: return model::Real{(rng.uniform() - 0.5) * std::pow(10.0, rng.uniform_int(-3, 6))};
    case 1: return model::Integer{rng.uniform_int(-5, 60)};
    case 2: return model::Text{kWords[rng.uniform_int(0, kWords.size() - 1)]};
    case 3: return model::Categorical{kWords[rng.uniform_int(0, kWords.size() - 1)]};
    default: return model::Probability{rng.uniform()};
  }
}

}  // namespace

Timestamp epoch() { return parse_rfc3339("2026-01-01T00:00:00Z"); }

Feature make_feature(std::string key, model::Value value, Timestamp t, FeatureKind kind,
                     Sensitivity sensitivity, ConsentScope consent, std::string source) {
  Feature f;
  f.dimension = *model::key_dimension(key);
  f.key = std::move(key);
  f.kind = kind;
  f.value = std::move(value);
  f.confidence = 1.0;
  f.observed_at = t;
  f.updated_at = t;
  f.decay = kind == FeatureKind::kTrait ? model::DecayPolicy{0.005, 0.05} : model::DecayPolicy{0.1, 0.05};
  f.sensitivity = sensitivity;
  f.provenance = {std::move(source), consent, std::nullopt, t};
  return f;
}

model::LearnerContext random_context(std::uint64_t seed, const ContextShape& shape,
                                     const std::string& learner_id) {
  Rng rng(seed);
  const auto t0 = jitter(rng, epoch(), 86'400'000LL * 30);
  auto ctx = model::LearnerContext::create(learner_id, t0);

  constexpr std::array<NodeKind, 6> kKinds = {NodeKind::kPeer,        NodeKind::kInstructor,
                                              NodeKind::kContentItem, NodeKind::kSkill,
                                              NodeKind::kActivity,    NodeKind::kEnvironment};
  std::vector<std::string> ids;
  const auto n_nodes = rng.uniform_int(0, shape.max_nodes);
  for (std::int64_t i = 0; i < n_nodes; ++i) {
    const auto kind = kKinds[rng.uniform_int(0, kKinds.size() - 1)];
    model::ContextNode node;
    node.id = "n" + std::to_string(i);
    node.kind = kind;
    node.dimension = model::expected_dimension(kind);
    if (rng.bernoulli(0.5)) node.attributes["label"] = model::Text{kWords[rng.uniform_int(0, 5)]};
    node.metadata = {"platform-" + std::to_string(rng.uniform_int(0, 2)), ConsentScope::kInstruction,
                     std::nullopt, jitter(rng, t0, 1000)};
    ctx.upsert_node(node);
    ids.push_back(node.id);
  }
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    if (!rng.bernoulli(0.5)) continue;
    const auto j = static_cast<std::size_t>(rng.uniform_int(i + 1, ids.size() - 1));
    model::ContextEdge e;
    e.src = ids[i];
    e.dst = ids[j];
    e.relation = rng.bernoulli(0.5) ? model::Relation::kPrerequisiteOf : model::Relation::kAttempted;
    e.weight = rng.uniform();
    e.metadata = {"platform-0", ConsentScope::kInstruction, std::nullopt, t0};
    ctx.upsert_edge(e);
  }

  constexpr std::array<const char*, 5> kPrefixes = {"who", "with_whom", "what", "when", "where"};
  const auto n_features = rng.uniform_int(1, shape.max_features);
  for (std::int64_t i = 0; i < n_features; ++i) {
    const std::string prefix = kPrefixes[rng.uniform_int(0, 4)];
    const auto kind = rng.bernoulli(0.3) ? FeatureKind::kTrait : FeatureKind::kState;
    auto sensitivity = static_cast<Sensitivity>(rng.uniform_int(0, shape.pii ? 3 : 2));
    const auto consent = rng.bernoulli(0.8) ? ConsentScope::kInstruction : ConsentScope::kResearch;
    const auto observed = jitter(rng, t0, 86'400'000LL * 5);
    auto f = make_feature(prefix + ".f" + std::to_string(i) + ".v", random_value(rng, sensitivity, seed),
                          observed, kind, sensitivity, consent,
                          "platform-" + std::to_string(rng.uniform_int(0, 2)));
    f.confidence = 0.5 + 0.5 * rng.uniform();
    f.updated_at = jitter(rng, observed, 86'400'000LL);
    ctx.set_feature(f);
  }

  if (rng.bernoulli(0.7)) {
    model::BeliefModel b;
    b.misconceptions.push_back({"bigger denominators mean bigger fractions", "1/8 > 1/4",
                                "comparing fractions"});
    b.profile["anxiety"] = static_cast<model::Level>(rng.uniform_int(0, 2));
    b.profile["conscientiousness"] = static_cast<model::Level>(rng.uniform_int(0, 2));
    b.provenance = {"survey", ConsentScope::kInstruction, std::nullopt, t0};
    ctx.attach_belief(b);
  }

  const auto n_events = rng.uniform_int(0, shape.max_events);
  for (std::int64_t i = 0; i < n_events; ++i) {
    ctx.append_evidence({learner_id, jitter(rng, t0, 86'400'000LL), model::EvidenceKind::kPlatformEvent,
                         learner_id, {{"name", "opened"}, {"n", i}, {"x", rng.uniform()}}});
  }
  return ctx;
}

model::LearnerContext diverge(const model::LearnerContext& base, std::uint64_t seed) {
  Rng rng(seed);
  auto ctx = base;
  for (const auto& f : base.all_features()) {
    if (!rng.bernoulli(0.4)) continue;
    auto g = f;
    g.value = random_value(rng, g.sensitivity, seed);
    // Equal timestamps half the time so the source tie-break is exercised.
    if (rng.bernoulli(0.5)) g.updated_at = f.updated_at + std::chrono::milliseconds(rng.uniform_int(1, 5000));
    g.provenance.source = "platform-" + std::to_string(rng.uniform_int(0, 3));
    ctx.set_feature(g);
  }
  const auto extra = rng.uniform_int(0, 3);
  for (std::int64_t i = 0; i < extra; ++i) {
    ctx.set_feature(make_feature("what.extra" + std::to_string(rng.uniform_int(0, 5)) + ".score",
                                 model::Probability{rng.uniform()}, base.clock(),
                                 FeatureKind::kState, Sensitivity::kLow, ConsentScope::kInstruction,
                                 "platform-" + std::to_string(rng.uniform_int(0, 3))));
  }
  if (rng.bernoulli(0.3)) {
    ctx.append_evidence({base.learner_id(), base.clock(), model::EvidenceKind::kPlatformEvent,
                         base.learner_id(), {{"name", "replica"}, {"seed", seed % 1000}}});
  }
  return ctx;
}

}  // namespace lc::testing
