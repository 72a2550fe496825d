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

#include "lc/model/json.h"

namespace lc::model {

namespace {

template <typename T>
T enum_field(const json& j, std::string_view field, T (*parse)(std::string_view)) {
  return parse(required_string(j, field));
}

void attributes_to_json(json& j, const AttributeMap& attrs) {
  j = json::object();
  for (const auto& [k, v] : attrs) j[k] = v;
}

AttributeMap attributes_from_json(const json& j) {
  AttributeMap out;
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "attributes must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) out.emplace(it.key(), it.value().get<Value>());
  return out;
}

}  // namespace

const json& required(const json& j, std::string_view field) {
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "expected an object");
  const auto it = j.find(field);
  if (it == j.end()) {
    throw Error(ErrorCode::kParseError, "missing field '" + std::string(field) + "'");
  }
  return *it;
}

std::string required_string(const json& j, std::string_view field) {
  const auto& v = required(j, field);
  if (!v.is_string()) {
    throw Error(ErrorCode::kParseError, "field '" + std::string(field) + "' must be a string");
  }
  return v.get<std::string>();
}

double required_number(const json& j, std::string_view field) {
  const auto& v = required(j, field);
  if (!v.is_number()) {
    throw Error(ErrorCode::kParseError, "field '" + std::string(field) + "' must be a number");
  }
  return v.get<double>();
}

json timestamp_to_json(Timestamp t) { return format_rfc3339(t); }

Timestamp timestamp_from_json(const json& j) {
  if (!j.is_string()) throw Error(ErrorCode::kParseError, "timestamp must be a string");
  return parse_rfc3339(j.get<std::string>());
}

void to_json(json& j, const Value& v) {
  std::visit(
      [&j](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Real>) {
          j = json{{"type", "real"}, {"value", x.value}};
        } else if constexpr (std::is_same_v<T, Integer>) {
          j = json{{"type", "integer"}, {"value", x.value}};
        } else if constexpr (std::is_same_v<T, Text>) {
          j = json{{"type", "text"}, {"value", x.value}};
        } else if constexpr (std::is_same_v<T, Categorical>) {
          j = json{{"type", "categorical"}, {"value", x.value}};
        } else {
          j = json{{"type", "probability"}, {"value", x.value}};
        }
      },
      v);
}

void from_json(const json& j, Value& v) {
  const auto type = required_string(j, "type");
  const auto& raw = required(j, "value");
  if (type == "real") {
    if (!raw.is_number()) throw Error(ErrorCode::kParseError, "real value must be a number");
    v = Real{raw.get<double>()};
  } else if (type == "integer") {
    if (!raw.is_number_integer()) {
      throw Error(ErrorCode::kParseError, "integer value must be an integer");
    }
    v = Integer{raw.get<std::int64_t>()};
  } else if (type == "text") {
    if (!raw.is_string()) throw Error(ErrorCode::kParseError, "text value must be a string");
    v = Text{raw.get<std::string>()};
  } else if (type == "categorical") {
    if (!raw.is_string()) throw Error(ErrorCode::kParseError, "categorical value must be a string");
    v = Categorical{raw.get<std::string>()};
  } else if (type == "probability") {
    if (!raw.is_number()) throw Error(ErrorCode::kParseError, "probability must be a number");
    v = Probability{raw.get<double>()};
  } else {
    throw Error(ErrorCode::kParseError, "unknown value type '" + type + "'");
  }
}

void to_json(json& j, const Provenance& p) {
  j = json{{"source", p.source},
           {"consent_scope", to_string(p.consent_scope)},
           {"retention_until",
            p.retention_until ? timestamp_to_json(*p.retention_until) : json(nullptr)},
           {"recorded_at", timestamp_to_json(p.recorded_at)}};
}

void from_json(const json& j, Provenance& p) {
  p.source = required_string(j, "source");
  p.consent_scope = enum_field(j, "consent_scope", parse_consent_scope);
  // Absent or null: unbounded retention.
  if (const auto it = j.find("retention_until"); it != j.end() && !it->is_null()) {
    p.retention_until = timestamp_from_json(*it);
  }
  p.recorded_at = timestamp_from_json(required(j, "recorded_at"));
}

void to_json(json& j, const DecayPolicy& d) { j = json{{"lambda", d.lambda}, {"floor", d.floor}}; }

void from_json(const json& j, DecayPolicy& d) {
  d.lambda = required_number(j, "lambda");
  d.floor = required_number(j, "floor");
}

void to_json(json& j, const ContextNode& n) {
  json attrs;
  attributes_to_json(attrs, n.attributes);
  j = json{{"id", n.id},
           {"kind", to_string(n.kind)},
           {"dimension", to_string(n.dimension)},
           {"attributes", std::move(attrs)},
           {"metadata", n.metadata}};
}

void from_json(const json& j, ContextNode& n) {
  n.id = required_string(j, "id");
  n.kind = enum_field(j, "kind", parse_node_kind);
  n.dimension = enum_field(j, "dimension", parse_dimension);
  n.attributes = j.contains("attributes") ? attributes_from_json(j.at("attributes")) : AttributeMap{};
  n.metadata = required(j, "metadata").get<Provenance>();
}

void to_json(json& j, const ContextEdge& e) {
  json attrs;
  attributes_to_json(attrs, e.attributes);
  j = json{{"src", e.src},
           {"dst", e.dst},
           {"relation", to_string(e.relation)},
           {"weight", e.weight},
           {"attributes", std::move(attrs)},
           {"metadata", e.metadata}};
}

void from_json(const json& j, ContextEdge& e) {
  e.src = required_string(j, "src");
  e.dst = required_string(j, "dst");
  e.relation = enum_field(j, "relation", parse_relation);
  e.weight = required_number(j, "weight");
  e.attributes = j.contains("attributes") ? attributes_from_json(j.at("attributes")) : AttributeMap{};
  e.metadata = required(j, "metadata").get<Provenance>();
}

void to_json(json& j, const Feature& f) {
  j = json{{"key", f.key},
           {"dimension", to_string(f.dimension)},
           {"kind", to_string(f.kind)},
           {"value", f.value},
           {"confidence", f.confidence},
           {"observed_at", timestamp_to_json(f.observed_at)},
           {"updated_at", timestamp_to_json(f.updated_at)},
           {"decay", f.decay},
           {"sensitivity", to_string(f.sensitivity)},
           {"provenance", f.provenance}};
  if (f.demoted_at) j["demoted_at"] = timestamp_to_json(*f.demoted_at);
}

void from_json(const json& j, Feature& f) {
  f.key = required_string(j, "key");
  f.dimension = enum_field(j, "dimension", parse_dimension);
  f.kind = enum_field(j, "kind", parse_feature_kind);
  f.value = required(j, "value").get<Value>();
  f.confidence = required_number(j, "confidence");
  f.observed_at = timestamp_from_json(required(j, "observed_at"));
  f.updated_at = timestamp_from_json(required(j, "updated_at"));
  f.decay = required(j, "decay").get<DecayPolicy>();
  f.sensitivity = enum_field(j, "sensitivity", parse_sensitivity);
  f.provenance = required(j, "provenance").get<Provenance>();
  f.demoted_at.reset();
  if (const auto it = j.find("demoted_at"); it != j.end() && !it->is_null()) {
    f.demoted_at = timestamp_from_json(*it);
  }
}

void to_json(json& j, const MisconceptionTriple& t) {
  j = json{{"underlying_belief", t.underlying_belief},
           {"erroneous_example", t.erroneous_example},
           {"triggering_feature", t.triggering_feature}};
}

void from_json(const json& j, MisconceptionTriple& t) {
  t.underlying_belief = required_string(j, "underlying_belief");
  t.erroneous_example = required_string(j, "erroneous_example");
  t.triggering_feature = required_string(j, "triggering_feature");
}

void to_json(json& j, const BeliefModel& b) {
  json profile = json::object();
  for (const auto& [attr, level] : b.profile) profile[attr] = to_string(level);
  j = json{{"misconceptions", b.misconceptions},
           {"profile", std::move(profile)},
           {"provenance", b.provenance}};
}

void from_json(const json& j, BeliefModel& b) {
  b.misconceptions = required(j, "misconceptions").get<std::vector<MisconceptionTriple>>();
  b.profile.clear();
  const auto& profile = required(j, "profile");
  if (!profile.is_object()) throw Error(ErrorCode::kParseError, "profile must be an object");
  for (auto it = profile.begin(); it != profile.end(); ++it) {
    if (!it.value().is_string()) throw Error(ErrorCode::kParseError, "profile level must be a string");
    b.profile.emplace(it.key(), parse_level(it.value().get<std::string>()));
  }
  if (const auto it = j.find("provenance"); it != j.end()) b.provenance = it->get<Provenance>();
}

void to_json(json& j, const EvidenceEvent& e) {
  j = json{{"learner_id", e.learner_id},
           {"at", timestamp_to_json(e.at)},
           {"kind", to_string(e.kind)},
           {"target", e.target},
           {"payload", e.payload}};
}

void from_json(const json& j, EvidenceEvent& e) {
  e.learner_id = required_string(j, "learner_id");
  e.at = timestamp_from_json(required(j, "at"));
  e.kind = enum_field(j, "kind", parse_evidence_kind);
  e.target = required_string(j, "target");
  e.payload = j.contains("payload") ? j.at("payload") : json::object();
  if (!e.payload.is_object()) throw Error(ErrorCode::kParseError, "payload must be an object");
}

}  // namespace lc::model
