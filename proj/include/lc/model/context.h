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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lc/model/types.h"

namespace lc::model {

struct ModelLimits {
  // Default decay constant for State features. Trait features must decay
  // strictly slower than this.
  double state_default_lambda = 0.1;
};

using FeatureMap = std::map<std::string, Feature>;
using NodeMap = std::map<std::string, ContextNode>;
using EdgeMap = std::map<EdgeKey, ContextEdge>;

// Per-learner context graph. Mutators validate first and either apply the
// change and bump the version by one, or throw lc::Error and leave the
// context untouched.
//
// Features are partitioned by dimension; each dimension has its own map.
class LearnerContext {
 public:
  // Raw field bundle used by deserialization and merge. No invariant checks;
  // run validate_schema() on the result.
  struct Parts {
    std::string learner_id;
    NodeMap nodes;
    EdgeMap edges;
    std::array<FeatureMap, 5> features;
    BeliefModel beliefs;
    std::vector<EvidenceEvent> evidence_log;
    std::uint64_t version = 1;
    Timestamp clock{};
  };

  // A context holding a single Learner node whose id is the learner id.
  static LearnerContext create(const std::string& learner_id, Timestamp at = {});
  static LearnerContext from_parts(Parts parts);

  const std::string& learner_id() const { return p_.learner_id; }
  std::uint64_t version() const { return p_.version; }
  Timestamp clock() const { return p_.clock; }

  const NodeMap& nodes() const { return p_.nodes; }
  const EdgeMap& edges() const { return p_.edges; }
  const FeatureMap& features(Dimension d) const { return p_.features[index(d)]; }
  std::vector<Feature> get_dimension(Dimension d) const;
  std::vector<Feature> all_features() const;
  std::size_t feature_count() const;
  const Feature* find_feature(std::string_view key) const;
  const ContextNode* find_node(std::string_view id) const;
  const BeliefModel& beliefs() const { return p_.beliefs; }
  const std::vector<EvidenceEvent>& evidence_log() const { return p_.evidence_log; }
  const Parts& parts() const { return p_; }

  void upsert_node(ContextNode node);
  void upsert_edge(ContextEdge edge);
  void set_feature(Feature feature, const ModelLimits& limits = {});
  void attach_belief(BeliefModel belief);
  void append_evidence(EvidenceEvent event);
  // Returns false (and leaves the version alone) when the key is absent.
  bool remove_feature(std::string_view key, Timestamp at);

  friend bool operator==(const LearnerContext& a, const LearnerContext& b);

 private:
  explicit LearnerContext(Parts p) : p_(std::move(p)) {}

  static std::size_t index(Dimension d) { return static_cast<std::size_t>(d); }
  void touch(Timestamp at);

  Parts p_;
};

LearnerContext new_context(const std::string& learner_id, Timestamp at = {});

// Throws the matching lc::Error when a single item violates its invariants.
void check_node(const ContextNode& node);
void check_feature(const Feature& feature, const ModelLimits& limits = {});
void check_belief(const BeliefModel& belief);

// True iff adding `edge` to `edges` would close a prerequisite cycle.
bool closes_prerequisite_cycle(const EdgeMap& edges, const ContextEdge& edge);
// True iff the prerequisite_of subgraph of `edges` has a cycle.
bool has_prerequisite_cycle(const EdgeMap& edges);

}  // namespace lc::model
