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

#include "lc/store/canonical.h"

#include "lc/common/digest.h"
#include "lc/common/error.h"
#include "lc/model/json.h"
#include "lc/model/validate.h"

namespace lc::store {

namespace {

using nlohmann::json;

const json& jsonld_context() {
  static const json kContext = {
      {"@vocab", kVocabulary},
      {"lc", kVocabulary},
      {"xsd", "http://www.w3.org/2001/XMLSchema#"},
      {"learner_id", "@id"},
      {"clock", {{"@type", "xsd:dateTime"}}},
      {"observed_at", {{"@type", "xsd:dateTime"}}},
      {"updated_at", {{"@type", "xsd:dateTime"}}},
      {"recorded_at", {{"@type", "xsd:dateTime"}}},
      {"retention_until", {{"@type", "xsd:dateTime"}}},
      {"at", {{"@type", "xsd:dateTime"}}},
      {"nodes", {{"@container", "@list"}}},
      {"edges", {{"@container", "@list"}}},
      {"features", {{"@container", "@index"}}},
      {"evidence_log", {{"@container", "@list"}}},
  };
  return kContext;
}

void throw_schema(const std::vector<model::Violation>& violations) {
  std::string msg = std::to_string(violations.size()) + " schema violation(s)";
  for (const auto& v : violations) msg += "; " + v.subject + ": " + v.message;
  throw Error(ErrorCode::kInvalidContext, msg);
}

}  // namespace

json context_to_json(const model::LearnerContext& ctx) {
  json nodes = json::array();
  for (const auto& [id, node] : ctx.nodes()) nodes.push_back(node);
  json edges = json::array();
  for (const auto& [key, edge] : ctx.edges()) edges.push_back(edge);
  json features = json::object();
  for (const auto d : model::kAllDimensions) {
    for (const auto& [key, f] : ctx.features(d)) features[key] = f;
  }
  return {{"@context", jsonld_context()},
          {"@type", "LearnerContext"},
          {"profile", kProfile},
          {"learner_id", ctx.learner_id()},
          {"version", ctx.version()},
          {"clock", model::timestamp_to_json(ctx.clock())},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"features", std::move(features)},
          {"beliefs", ctx.beliefs()},
          {"evidence_log", ctx.evidence_log()}};
}

model::LearnerContext context_from_json(const json& j) {
  model::LearnerContext::Parts parts;
  try {
    model::guarded_parse(
        [&] {
          if (model::required_string(j, "profile") != kProfile) {
            throw Error(ErrorCode::kParseError, "unsupported profile");
          }
          parts.learner_id = model::required_string(j, "learner_id");
          const auto& version = model::required(j, "version");
          if (!version.is_number_unsigned()) {
            throw Error(ErrorCode::kParseError, "version must be a non-negative integer");
          }
          parts.version = version.get<std::uint64_t>();
          parts.clock = model::timestamp_from_json(model::required(j, "clock"));
          for (const auto& n : model::required(j, "nodes")) {
            auto node = n.get<model::ContextNode>();
            const auto id = node.id;
            if (!parts.nodes.emplace(id, std::move(node)).second) {
              throw Error(ErrorCode::kParseError, "duplicate node '" + id + "'");
            }
          }
          for (const auto& e : model::required(j, "edges")) {
            auto edge = e.get<model::ContextEdge>();
            const auto key = edge.key();
            if (!parts.edges.emplace(key, std::move(edge)).second) {
              throw Error(ErrorCode::kParseError, "duplicate edge");
            }
          }
          const auto& features = model::required(j, "features");
          if (!features.is_object()) throw Error(ErrorCode::kParseError, "features must be an object");
          for (auto it = features.begin(); it != features.end(); ++it) {
            auto f = it.value().get<model::Feature>();
            if (f.key != it.key()) throw Error(ErrorCode::kParseError, "feature key mismatch");
            const auto idx = static_cast<std::size_t>(f.dimension);
            parts.features[idx].emplace(f.key, std::move(f));
          }
          parts.beliefs = model::required(j, "beliefs").get<model::BeliefModel>();
          parts.evidence_log =
              model::required(j, "evidence_log").get<std::vector<model::EvidenceEvent>>();
          return 0;
        },
        "context document");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidContext) throw;
    throw Error(ErrorCode::kInvalidContext, e.what());
  }
  auto ctx = model::LearnerContext::from_parts(std::move(parts));
  if (auto v = model::validate_schema(ctx); !v.empty()) throw_schema(v);
  return ctx;
}

CanonicalDocument canonical_serialize(const model::LearnerContext& ctx) {
  if (auto v = model::validate_schema(ctx); !v.empty()) throw_schema(v);
  CanonicalDocument doc;
  try {
    doc.bytes = context_to_json(ctx).dump();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidContext, std::string("not serializable: ") + e.what());
  }
  return doc;
}

model::LearnerContext deserialize(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidContext, std::string("malformed JSON: ") + e.what());
  }
  return context_from_json(j);
}

ContextDigest content_hash(const model::LearnerContext& ctx) {
  return {"sha-256", sha256_hex(canonical_serialize(ctx).bytes)};
}

}  // namespace lc::store
