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

#include "lc/model/types.h"

#include <sstream>

#include "lc/common/error.h"

namespace lc::model {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::pair<std::string_view, E>, N>& table,
             const char* what) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  throw Error(ErrorCode::kParseError, std::string("unknown ") + what + " '" + std::string(s) + "'");
}

constexpr std::array<std::pair<std::string_view, Dimension>, 5> kDimensionNames = {{
    {"who", Dimension::kWho},
    {"with_whom", Dimension::kWithWhom},
    {"what", Dimension::kWhat},
    {"when", Dimension::kWhen},
    {"where", Dimension::kWhere},
}};

constexpr std::array<std::pair<std::string_view, NodeKind>, 7> kNodeKindNames = {{
    {"learner", NodeKind::kLearner},
    {"peer", NodeKind::kPeer},
    {"instructor", NodeKind::kInstructor},
    {"content_item", NodeKind::kContentItem},
    {"skill", NodeKind::kSkill},
    {"activity", NodeKind::kActivity},
    {"environment", NodeKind::kEnvironment},
}};

constexpr std::array<std::pair<std::string_view, Relation>, 6> kRelationNames = {{
    {"prerequisite_of", Relation::kPrerequisiteOf},
    {"collaborates_with", Relation::kCollaboratesWith},
    {"authored_feedback", Relation::kAuthoredFeedback},
    {"attempted", Relation::kAttempted},
    {"occurs_in", Relation::kOccursIn},
    {"member_of", Relation::kMemberOf},
}};

constexpr std::array<std::pair<std::string_view, FeatureKind>, 2> kFeatureKindNames = {{
    {"state", FeatureKind::kState},
    {"trait", FeatureKind::kTrait},
}};

constexpr std::array<std::pair<std::string_view, Sensitivity>, 4> kSensitivityNames = {{
    {"none", Sensitivity::kNone},
    {"low", Sensitivity::kLow},
    {"high", Sensitivity::kHigh},
    {"pii", Sensitivity::kPii},
}};

constexpr std::array<std::pair<std::string_view, ConsentScope>, 3> kConsentNames = {{
    {"research", ConsentScope::kResearch},
    {"instruction", ConsentScope::kInstruction},
    {"none", ConsentScope::kNone},
}};

constexpr std::array<std::pair<std::string_view, Level>, 3> kLevelNames = {{
    {"low", Level::kLow},
    {"medium", Level::kMedium},
    {"high", Level::kHigh},
}};

constexpr std::array<std::pair<std::string_view, EvidenceKind>, 4> kEvidenceKindNames = {{
    {"answer", EvidenceKind::kAnswer},
    {"dialogue_turn", EvidenceKind::kDialogueTurn},
    {"survey_item", EvidenceKind::kSurveyItem},
    {"platform_event", EvidenceKind::kPlatformEvent},
}};

template <typename E, std::size_t N>
std::string_view name_of(E value, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "?";
}

}  // namespace

Dimension expected_dimension(NodeKind kind) {
  switch (kind) {
    case NodeKind::kLearner: return Dimension::kWho;
    case NodeKind::kPeer:
    case NodeKind::kInstructor: return Dimension::kWithWhom;
    case NodeKind::kContentItem:
    case NodeKind::kSkill:
    case NodeKind::kActivity: return Dimension::kWhat;
    case NodeKind::kEnvironment: return Dimension::kWhere;
  }
  return Dimension::kWhat;
}

std::string_view to_string(Dimension d) { return name_of(d, kDimensionNames); }
std::string_view to_string(NodeKind k) { return name_of(k, kNodeKindNames); }
std::string_view to_string(Relation r) { return name_of(r, kRelationNames); }
std::string_view to_string(FeatureKind k) { return name_of(k, kFeatureKindNames); }
std::string_view to_string(Sensitivity s) { return name_of(s, kSensitivityNames); }
std::string_view to_string(ConsentScope c) { return name_of(c, kConsentNames); }
std::string_view to_string(Level l) { return name_of(l, kLevelNames); }
std::string_view to_string(EvidenceKind k) { return name_of(k, kEvidenceKindNames); }

Dimension parse_dimension(std::string_view s) { return parse_enum(s, kDimensionNames, "dimension"); }
NodeKind parse_node_kind(std::string_view s) { return parse_enum(s, kNodeKindNames, "node kind"); }
Relation parse_relation(std::string_view s) { return parse_enum(s, kRelationNames, "relation"); }
FeatureKind parse_feature_kind(std::string_view s) {
  return parse_enum(s, kFeatureKindNames, "feature kind");
}
Sensitivity parse_sensitivity(std::string_view s) {
  return parse_enum(s, kSensitivityNames, "sensitivity");
}
ConsentScope parse_consent_scope(std::string_view s) {
  return parse_enum(s, kConsentNames, "consent scope");
}
Level parse_level(std::string_view s) { return parse_enum(s, kLevelNames, "level"); }
EvidenceKind parse_evidence_kind(std::string_view s) {
  return parse_enum(s, kEvidenceKindNames, "evidence kind");
}

std::optional<Dimension> try_parse_dimension(std::string_view s) {
  for (const auto& [name, value] : kDimensionNames) {
    if (name == s) return value;
  }
  return std::nullopt;
}

std::string value_text(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Text> || std::is_same_v<T, Categorical>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Integer>) {
          return std::to_string(x.value);
        } else {
          return nlohmann::json(x.value).dump();
        }
      },
      v);
}

std::optional<Dimension> key_dimension(std::string_view key) {
  const auto dot = key.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  return try_parse_dimension(key.substr(0, dot));
}

bool is_well_formed_key(std::string_view key) {
  if (!key_dimension(key)) return false;
  // No empty segments.
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const auto seg = key.substr(start, dot == std::string_view::npos ? key.npos : dot - start);
    if (seg.empty()) return false;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return true;
}

}  // namespace lc::model
