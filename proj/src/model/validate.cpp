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

#include "lc/model/validate.h"

#include "lc/common/error.h"

namespace lc::model {

std::string_view to_string(Check c) {
  switch (c) {
    case Check::kSchema: return "schema";
    case Check::kCompleteness: return "completeness";
    case Check::kTimestamp: return "timestamp";
    case Check::kPiiSeparation: return "pii_separation";
  }
  return "?";
}

std::size_t ValidationReport::count(Check c) const {
  std::size_t n = 0;
  for (const auto& v : violations) n += v.check == c;
  return n;
}

std::vector<Violation> validate_schema(const LearnerContext& ctx, const ModelLimits& limits) {
  std::vector<Violation> out;
  auto schema = [&](std::string subject, std::string message) {
    out.push_back({Check::kSchema, std::move(subject), std::move(message)});
  };

  if (ctx.learner_id().empty()) schema("learner_id", "empty learner id");

  std::size_t learners = 0;
  for (const auto& [id, node] : ctx.nodes()) {
    if (id != node.id) schema("node:" + id, "map key differs from node id");
    try {
      check_node(node);
    } catch (const Error& e) {
      schema("node:" + id, e.what());
    }
    if (node.kind == NodeKind::kLearner) ++learners;
  }
  if (learners != 1) {
    schema("nodes", "expected exactly one learner node, found " + std::to_string(learners));
  }

  for (const auto& [key, edge] : ctx.edges()) {
    const std::string subject = "edge:" + edge.src + "|" + std::string(to_string(edge.relation)) +
                                "|" + edge.dst;
    if (key != edge.key()) schema(subject, "map key differs from edge identity");
    if (!ctx.nodes().contains(edge.src) || !ctx.nodes().contains(edge.dst)) {
      schema(subject, "missing endpoint");
    }
    if (!(edge.weight >= 0.0 && edge.weight <= 1.0)) schema(subject, "weight out of [0,1]");
  }
  if (has_prerequisite_cycle(ctx.edges())) schema("edges", "prerequisite_of subgraph has a cycle");

  for (const auto d : kAllDimensions) {
    for (const auto& [key, f] : ctx.features(d)) {
      if (key != f.key) schema("feature:" + key, "map key differs from feature key");
      if (f.dimension != d) schema("feature:" + key, "stored under the wrong dimension");
      if (f.updated_at < f.observed_at) continue;  // reported by the timestamp check
      try {
        check_feature(f, limits);
      } catch (const Error& e) {
        schema("feature:" + key, e.what());
      }
    }
  }

  try {
    check_belief(ctx.beliefs());
  } catch (const Error& e) {
    schema("beliefs", e.what());
  }
  return out;
}

ValidationReport validate(const LearnerContext& ctx, Timestamp now,
                          const ValidateOptions& options) {
  ValidationReport report;
  report.violations = validate_schema(ctx, options.limits);

  for (const auto d : kAllDimensions) {
    if (!ctx.features(d).empty() || options.waived.contains(d)) continue;
    Violation v{Check::kCompleteness, std::string(to_string(d)), "dimension has no features"};
    if (d == Dimension::kWho) {
      report.violations.push_back(std::move(v));
    } else {
      report.warnings.push_back(std::move(v));
    }
  }

  auto stamp = [&](std::string subject, std::string message) {
    report.violations.push_back({Check::kTimestamp, std::move(subject), std::move(message)});
  };
  for (const auto d : kAllDimensions) {
    for (const auto& [key, f] : ctx.features(d)) {
      const std::string subject = "feature:" + key;
      if (f.observed_at > now) {
        stamp(subject, "observed_at is in the future");
      } else if (f.updated_at > now) {
        stamp(subject, "updated_at is in the future");
      }
      if (f.updated_at < f.observed_at) stamp(subject, "updated_at precedes observed_at");
      if (f.provenance.recorded_at > now) stamp(subject, "provenance recorded_at is in the future");
    }
  }
  for (const auto& [id, node] : ctx.nodes()) {
    if (node.metadata.recorded_at > now) stamp("node:" + id, "recorded_at is in the future");
  }
  for (const auto& [k, edge] : ctx.edges()) {
    if (edge.metadata.recorded_at > now) {
      stamp("edge:" + edge.src + "|" + std::string(to_string(edge.relation)) + "|" + edge.dst,
            "recorded_at is in the future");
    }
  }
  if (ctx.beliefs().provenance.recorded_at > now) stamp("beliefs", "recorded_at is in the future");

  for (const auto d : kAllDimensions) {
    for (const auto& [key, f] : ctx.features(d)) {
      if (f.sensitivity == Sensitivity::kPii && f.provenance.consent_scope == ConsentScope::kNone) {
        report.violations.push_back(
            {Check::kPiiSeparation, "feature:" + key, "PII feature without consent scope"});
      }
    }
  }
  return report;
}

nlohmann::json to_json(const ValidationReport& r) {
  auto list = [](const std::vector<Violation>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& x : v) {
      out.push_back({{"check", to_string(x.check)}, {"subject", x.subject}, {"message", x.message}});
    }
    return out;
  };
  return {{"valid", r.valid()}, {"violations", list(r.violations)}, {"warnings", list(r.warnings)}};
}

}  // namespace lc::model
