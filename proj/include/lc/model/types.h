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
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "lc/common/time.h"

namespace lc::model {

enum class Dimension { kWho, kWithWhom, kWhat, kWhen, kWhere };

inline constexpr std::array<Dimension, 5> kAllDimensions = {
    Dimension::kWho, Dimension::kWithWhom, Dimension::kWhat, Dimension::kWhen, Dimension::kWhere};

enum class NodeKind { kLearner, kPeer, kInstructor, kContentItem, kSkill, kActivity, kEnvironment };

enum class Relation {
  kPrerequisiteOf,
  kCollaboratesWith,
  kAuthoredFeedback,
  kAttempted,
  kOccursIn,
  kMemberOf,
};

enum class FeatureKind { kState, kTrait };
enum class Sensitivity { kNone, kLow, kHigh, kPii };
enum class ConsentScope { kResearch, kInstruction, kNone };
enum class Level { kLow, kMedium, kHigh };

// Kind<->dimension table for graph nodes.
Dimension expected_dimension(NodeKind kind);

std::string_view to_string(Dimension d);
std::string_view to_string(NodeKind k);
std::string_view to_string(Relation r);
std::string_view to_string(FeatureKind k);
std::string_view to_string(Sensitivity s);
std::string_view to_string(ConsentScope c);
std::string_view to_string(Level l);

// Parsers throw Error(kParseError) on unknown names.
Dimension parse_dimension(std::string_view s);
NodeKind parse_node_kind(std::string_view s);
Relation parse_relation(std::string_view s);
FeatureKind parse_feature_kind(std::string_view s);
Sensitivity parse_sensitivity(std::string_view s);
ConsentScope parse_consent_scope(std::string_view s);
Level parse_level(std::string_view s);
std::optional<Dimension> try_parse_dimension(std::string_view s);

struct Provenance {
  std::string source;
  ConsentScope consent_scope = ConsentScope::kInstruction;
  std::optional<Timestamp> retention_until;  // nullopt: unbounded
  Timestamp recorded_at{};

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Tagged scalar payloads.
struct Real {
  double value = 0;
  friend bool operator==(const Real&, const Real&) = default;
};
struct Integer {
  std::int64_t value = 0;
  friend bool operator==(const Integer&, const Integer&) = default;
};
struct Text {
  std::string value;
  friend bool operator==(const Text&, const Text&) = default;
};
struct Categorical {
  std::string value;
  friend bool operator==(const Categorical&, const Categorical&) = default;
};
struct Probability {
  double value = 0;
  friend bool operator==(const Probability&, const Probability&) = default;
};

using Value = std::variant<Real, Integer, Text, Categorical, Probability>;

// Human-readable rendering of the payload, without the type tag.
std::string value_text(const Value& v);

using AttributeMap = std::map<std::string, Value>;

struct DecayPolicy {
  double lambda = 0.1;  // per day
  double floor = 0.05;  // effective weight below which the feature is prunable

  friend bool operator==(const DecayPolicy&, const DecayPolicy&) = default;
};

struct ContextNode {
  std::string id;
  NodeKind kind = NodeKind::kSkill;
  Dimension dimension = Dimension::kWhat;
  AttributeMap attributes;
  Provenance metadata;

  friend bool operator==(const ContextNode&, const ContextNode&) = default;
};

struct EdgeKey {
  std::string src;
  Relation relation = Relation::kPrerequisiteOf;
  std::string dst;

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};

struct ContextEdge {
  std::string src;
  std::string dst;
  Relation relation = Relation::kPrerequisiteOf;
  double weight = 1.0;
  AttributeMap attributes;
  Provenance metadata;

  EdgeKey key() const { return {src, relation, dst}; }
  friend bool operator==(const ContextEdge&, const ContextEdge&) = default;
};

struct Feature {
  std::string key;  // "<dimension>.<segment>[.<segment>...]"
  Dimension dimension = Dimension::kWho;
  FeatureKind kind = FeatureKind::kState;
  Value value;
  double confidence = 1.0;
  Timestamp observed_at{};
  Timestamp updated_at{};
  DecayPolicy decay;
  Sensitivity sensitivity = Sensitivity::kNone;
  Provenance provenance;
  // Set when a Trait was demoted by the forgetting pass; cleared when it
  // clears the floor again.
  std::optional<Timestamp> demoted_at;

  friend bool operator==(const Feature&, const Feature&) = default;
};

struct MisconceptionTriple {
  std::string underlying_belief;
  std::string erroneous_example;
  std::string triggering_feature;

  friend bool operator==(const MisconceptionTriple&, const MisconceptionTriple&) = default;
};

inline constexpr std::array<std::string_view, 3> kProfileAttributes = {
    "anxiety", "conscientiousness", "language_proficiency"};

struct BeliefModel {
  std::vector<MisconceptionTriple> misconceptions;
  std::map<std::string, Level> profile;
  Provenance provenance;

  friend bool operator==(const BeliefModel&, const BeliefModel&) = default;
};

enum class EvidenceKind { kAnswer, kDialogueTurn, kSurveyItem, kPlatformEvent };
std::string_view to_string(EvidenceKind k);
EvidenceKind parse_evidence_kind(std::string_view s);

struct EvidenceEvent {
  std::string learner_id;
  Timestamp at{};
  EvidenceKind kind = EvidenceKind::kAnswer;
  std::string target;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const EvidenceEvent&, const EvidenceEvent&) = default;
};

// First key segment; nullopt if it is not a dimension name.
std::optional<Dimension> key_dimension(std::string_view key);
bool is_well_formed_key(std::string_view key);

}  // namespace lc::model
