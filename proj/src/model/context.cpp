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

#include "lc/model/context.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "lc/common/error.h"

namespace lc::model {

namespace {

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

void check_node(const ContextNode& node) {
  if (node.id.empty()) throw Error(ErrorCode::kEmptyId, "node id is empty");
  if (expected_dimension(node.kind) != node.dimension) {
    throw Error(ErrorCode::kKindDimensionMismatch,
                "node '" + node.id + "' of kind " + std::string(to_string(node.kind)) +
                    " cannot carry dimension " + std::string(to_string(node.dimension)));
  }
}

void check_feature(const Feature& f, const ModelLimits& limits) {
  if (!is_well_formed_key(f.key)) {
    throw Error(ErrorCode::kInvalidFeature, "malformed feature key '" + f.key + "'");
  }
  if (*key_dimension(f.key) != f.dimension) {
    throw Error(ErrorCode::kInvalidFeature, "feature '" + f.key + "' is tagged dimension " +
                                                std::string(to_string(f.dimension)) +
                                                " but its key names another dimension");
  }
  if (const auto* p = std::get_if<Probability>(&f.value); p && !in_unit(p->value)) {
    throw Error(ErrorCode::kInvalidProbability,
                "feature '" + f.key + "' probability " + std::to_string(p->value) + " not in [0,1]");
  }
  if (const auto* r = std::get_if<Real>(&f.value); r && !std::isfinite(r->value)) {
    throw Error(ErrorCode::kInvalidFeature, "feature '" + f.key + "' has a non-finite value");
  }
  if (!in_unit(f.confidence)) {
    throw Error(ErrorCode::kInvalidFeature, "feature '" + f.key + "' confidence not in [0,1]");
  }
  if (f.updated_at < f.observed_at) {
    throw Error(ErrorCode::kInvalidFeature, "feature '" + f.key + "' updated before observed");
  }
  if (!std::isfinite(f.decay.lambda) || f.decay.lambda < 0.0 || !in_unit(f.decay.floor)) {
    throw Error(ErrorCode::kInvalidFeature, "feature '" + f.key + "' has an invalid decay policy");
  }
  if (f.kind == FeatureKind::kTrait && f.decay.lambda >= limits.state_default_lambda) {
    throw Error(ErrorCode::kTraitDecayTooFast,
                "trait '" + f.key + "' lambda " + std::to_string(f.decay.lambda) +
                    " must be below the state default " +
                    std::to_string(limits.state_default_lambda));
  }
}

void check_belief(const BeliefModel& belief) {
  for (std::size_t i = 0; i < belief.misconceptions.size(); ++i) {
    const auto& t = belief.misconceptions[i];
    if (t.underlying_belief.empty() || t.erroneous_example.empty() ||
        t.triggering_feature.empty()) {
      throw Error(ErrorCode::kEmptyTripleField,
                  "misconception #" + std::to_string(i) + " has an empty field");
    }
  }
  for (const auto& [attr, level] : belief.profile) {
    if (std::find(kProfileAttributes.begin(), kProfileAttributes.end(), attr) ==
        kProfileAttributes.end()) {
      throw Error(ErrorCode::kUnknownProfileAttribute, "profile attribute '" + attr + "'");
    }
  }
}

bool closes_prerequisite_cycle(const EdgeMap& edges, const ContextEdge& edge) {
  if (edge.relation != Relation::kPrerequisiteOf) return false;
  if (edge.src == edge.dst) return true;
  // Is src reachable from dst?
  std::multimap<std::string, std::string> adj;
  for (const auto& [k, e] : edges) {
    if (k.relation == Relation::kPrerequisiteOf) adj.emplace(k.src, k.dst);
  }
  std::set<std::string> seen{edge.dst};
  std::queue<std::string> frontier;
  frontier.push(edge.dst);
  while (!frontier.empty()) {
    const auto cur = frontier.front();
    frontier.pop();
    if (cur == edge.src) return true;
    const auto [lo, hi] = adj.equal_range(cur);
    for (auto it = lo; it != hi; ++it) {
      if (seen.insert(it->second).second) frontier.push(it->second);
    }
  }
  return false;
}

bool has_prerequisite_cycle(const EdgeMap& edges) {
  std::map<std::string, int> indegree;
  std::multimap<std::string, std::string> adj;
  for (const auto& [k, e] : edges) {
    if (k.relation != Relation::kPrerequisiteOf) continue;
    adj.emplace(k.src, k.dst);
    indegree.try_emplace(k.src, 0);
    ++indegree[k.dst];
  }
  std::queue<std::string> ready;
  for (const auto& [n, d] : indegree) {
    if (d == 0) ready.push(n);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const auto n = ready.front();
    ready.pop();
    ++visited;
    const auto [lo, hi] = adj.equal_range(n);
    for (auto it = lo; it != hi; ++it) {
      if (--indegree[it->second] == 0) ready.push(it->second);
    }
  }
  return visited != indegree.size();
}

LearnerContext LearnerContext::create(const std::string& learner_id, Timestamp at) {
  if (learner_id.empty()) throw Error(ErrorCode::kEmptyId, "learner id is empty");
  Parts p;
  p.learner_id = learner_id;
  p.nodes.emplace(learner_id, ContextNode{learner_id, NodeKind::kLearner, Dimension::kWho, {},
                                          Provenance{"lc", ConsentScope::kInstruction,
                                                     std::nullopt, at}});
  p.beliefs.provenance = Provenance{"lc", ConsentScope::kInstruction, std::nullopt, at};
  p.version = 1;
  p.clock = at;
  return LearnerContext(std::move(p));
}

LearnerContext LearnerContext::from_parts(Parts parts) { return LearnerContext(std::move(parts)); }

LearnerContext new_context(const std::string& learner_id, Timestamp at) {
  return LearnerContext::create(learner_id, at);
}

void LearnerContext::touch(Timestamp at) {
  ++p_.version;
  p_.clock = std::max(p_.clock, at);
}

std::vector<Feature> LearnerContext::get_dimension(Dimension d) const {
  std::vector<Feature> out;
  const auto& m = p_.features[index(d)];
  out.reserve(m.size());
  for (const auto& [k, f] : m) out.push_back(f);
  return out;
}

std::vector<Feature> LearnerContext::all_features() const {
  std::vector<Feature> out;
  for (const auto d : kAllDimensions) {
    for (const auto& [k, f] : p_.features[index(d)]) out.push_back(f);
  }
  std::sort(out.begin(), out.end(), [](const Feature& a, const Feature& b) { return a.key < b.key; });
  return out;
}

std::size_t LearnerContext::feature_count() const {
  std::size_t n = 0;
  for (const auto& m : p_.features) n += m.size();
  return n;
}

const Feature* LearnerContext::find_feature(std::string_view key) const {
  const auto dim = key_dimension(key);
  if (!dim) return nullptr;
  const auto& m = p_.features[index(*dim)];
  const auto it = m.find(std::string(key));
  return it == m.end() ? nullptr : &it->second;
}

const ContextNode* LearnerContext::find_node(std::string_view id) const {
  const auto it = p_.nodes.find(std::string(id));
  return it == p_.nodes.end() ? nullptr : &it->second;
}

void LearnerContext::upsert_node(ContextNode node) {
  check_node(node);
  const auto existing = p_.nodes.find(node.id);
  if (node.kind == NodeKind::kLearner) {
    for (const auto& [id, n] : p_.nodes) {
      if (n.kind == NodeKind::kLearner && id != node.id) {
        throw Error(ErrorCode::kDuplicateLearnerNode,
                    "context already has learner node '" + id + "'");
      }
    }
  } else if (existing != p_.nodes.end() && existing->second.kind == NodeKind::kLearner) {
    throw Error(ErrorCode::kKindDimensionMismatch,
                "learner node '" + node.id + "' cannot change kind");
  }
  const auto at = node.metadata.recorded_at;
  p_.nodes.insert_or_assign(node.id, std::move(node));
  touch(at);
}

void LearnerContext::upsert_edge(ContextEdge edge) {
  if (!p_.nodes.contains(edge.src) || !p_.nodes.contains(edge.dst)) {
    throw Error(ErrorCode::kMissingEndpoint,
                "edge " + edge.src + " -> " + edge.dst + " references an unknown node");
  }
  if (!in_unit(edge.weight)) {
    throw Error(ErrorCode::kWeightOutOfRange, "edge weight " + std::to_string(edge.weight));
  }
  if (closes_prerequisite_cycle(p_.edges, edge)) {
    throw Error(ErrorCode::kPrerequisiteCycle,
                "prerequisite_of " + edge.src + " -> " + edge.dst + " closes a cycle");
  }
  const auto at = edge.metadata.recorded_at;
  p_.edges.insert_or_assign(edge.key(), std::move(edge));
  touch(at);
}

void LearnerContext::set_feature(Feature feature, const ModelLimits& limits) {
  check_feature(feature, limits);
  const auto at = feature.updated_at;
  auto& m = p_.features[index(feature.dimension)];
  m.insert_or_assign(feature.key, std::move(feature));
  touch(at);
}

void LearnerContext::attach_belief(BeliefModel belief) {
  check_belief(belief);
  const auto at = belief.provenance.recorded_at;
  p_.beliefs = std::move(belief);
  touch(at);
}

void LearnerContext::append_evidence(EvidenceEvent event) {
  const auto at = event.at;
  p_.evidence_log.push_back(std::move(event));
  touch(at);
}

bool LearnerContext::remove_feature(std::string_view key, Timestamp at) {
  const auto dim = key_dimension(key);
  if (!dim) return false;
  if (p_.features[index(*dim)].erase(std::string(key)) == 0) return false;
  touch(at);
  return true;
}

bool operator==(const LearnerContext& a, const LearnerContext& b) {
  const auto& x = a.p_;
  const auto& y = b.p_;
  return x.learner_id == y.learner_id && x.nodes == y.nodes && x.edges == y.edges &&
         x.features == y.features && x.beliefs == y.beliefs && x.evidence_log == y.evidence_log &&
         x.version == y.version && x.clock == y.clock;
}

}  // namespace lc::model
