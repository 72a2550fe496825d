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

#include "lc/temporal/evidence.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "lc/common/error.h"
#include "lc/model/json.h"

namespace lc::temporal {

namespace {

using model::EvidenceEvent;
using model::EvidenceKind;
using model::Feature;
using nlohmann::json;

[[noreturn]] void invalid(const EvidenceEvent& e, const std::string& why) {
  throw Error(ErrorCode::kInvalidEvent,
              std::string(model::to_string(e.kind)) + " event for '" + e.target + "': " + why);
}

[[noreturn]] void unresolvable(const EvidenceEvent& e) {
  throw Error(ErrorCode::kUnresolvableTarget, "cannot resolve target '" + e.target + "'");
}

void check_retention(const Feature* f, const EvidenceEvent& e) {
  if (f && f->provenance.retention_until && e.at > *f->provenance.retention_until) {
    throw Error(ErrorCode::kStaleEvent, "target '" + f->key + "' retention ended " +
                                            format_rfc3339(*f->provenance.retention_until));
  }
}

double number_field(const EvidenceEvent& e, const char* field) {
  const auto it = e.payload.find(field);
  if (it == e.payload.end() || !it->is_number()) invalid(e, std::string("payload.") + field + " must be a number");
  return it->get<double>();
}

std::string string_field(const EvidenceEvent& e, const char* field, const char* fallback = nullptr) {
  const auto it = e.payload.find(field);
  if (it == e.payload.end() && fallback) return fallback;
  if (it == e.payload.end() || !it->is_string()) invalid(e, std::string("payload.") + field + " must be a string");
  return it->get<std::string>();
}

Feature fresh_feature(const std::string& key, const EvidenceEvent& e, const IngestOptions& o,
                      std::string source) {
  Feature f;
  f.key = key;
  f.dimension = *model::key_dimension(key);
  f.kind = model::FeatureKind::kState;
  f.confidence = 1.0;
  f.observed_at = e.at;
  f.updated_at = e.at;
  f.decay = o.temporal.policy_for(f.kind);
  f.sensitivity = model::Sensitivity::kNone;
  f.provenance = {std::move(source), model::ConsentScope::kInstruction, std::nullopt, e.at};
  return f;
}

void stamp(Feature& f, Timestamp at) {
  f.observed_at = std::max(f.observed_at, at);
  f.updated_at = std::max({f.updated_at, at, f.observed_at});
  f.demoted_at.reset();
}

void ingest_answer(model::LearnerContext& ctx, const EvidenceEvent& e, const IngestOptions& o) {
  const auto it = e.payload.find("correct");
  if (it == e.payload.end() || !it->is_boolean()) invalid(e, "payload.correct must be a boolean");
  const bool correct = it->get<bool>();
  check_params(o.bkt);

  std::string key;
  if (model::is_well_formed_key(e.target)) {
    key = e.target;
  } else if (const auto* node = ctx.find_node(e.target);
             node && (node->kind == model::NodeKind::kSkill ||
                      node->kind == model::NodeKind::kContentItem)) {
    key = mastery_key(e.target);
  } else {
    unresolvable(e);
  }

  const Feature* existing = ctx.find_feature(key);
  check_retention(existing, e);
  Feature f;
  if (existing) {
    if (!std::holds_alternative<model::Probability>(existing->value)) {
      throw Error(ErrorCode::kUnresolvableTarget, "'" + key + "' is not a mastery probability");
    }
    f = *existing;
  } else {
    f = fresh_feature(key, e, o, string_field(e, "source", "evidence"));
    f.value = model::Probability{o.bkt.p_init};
  }
  const double prior = std::get<model::Probability>(f.value).value;
  f.value = model::Probability{bkt_update(prior, correct, o.bkt)};
  stamp(f, e.at);
  ctx.set_feature(std::move(f), o.temporal.limits());
}

void ingest_survey(model::LearnerContext& ctx, const EvidenceEvent& e, const IngestOptions& o) {
  if (!model::is_well_formed_key(e.target)) unresolvable(e);
  const double response = number_field(e, "response");
  const double hi = number_field(e, "scale_max");
  const double lo = e.payload.contains("scale_min") ? number_field(e, "scale_min") : 0.0;
  if (!(hi > lo)) invalid(e, "scale_max must exceed scale_min");
  if (response < lo || response > hi) invalid(e, "response outside the declared scale");

  const Feature* existing = ctx.find_feature(e.target);
  check_retention(existing, e);
  Feature f = existing ? *existing
                       : fresh_feature(e.target, e, o, string_field(e, "instrument", "survey"));
  f.value = model::Probability{(response - lo) / (hi - lo)};
  stamp(f, e.at);
  ctx.set_feature(std::move(f), o.temporal.limits());
}

void ingest_log_event(model::LearnerContext& ctx, const EvidenceEvent& e) {
  if (e.kind == EvidenceKind::kDialogueTurn) {
    string_field(e, "speaker");
    string_field(e, "text");
  } else {
    string_field(e, "name");
  }
  if (!ctx.find_node(e.target) && !model::is_well_formed_key(e.target)) unresolvable(e);
  check_retention(ctx.find_feature(e.target), e);
  ctx.append_evidence(e);
}

}  // namespace

std::string mastery_key(std::string_view node_id) {
  return "who.knowledge." + std::string(node_id);
}

void ingest_evidence(model::LearnerContext& ctx, const EvidenceEvent& event,
                     const IngestOptions& options) {
  if (event.learner_id != ctx.learner_id()) {
    throw Error(ErrorCode::kLearnerMismatch,
                "event for '" + event.learner_id + "' sent to '" + ctx.learner_id() + "'");
  }
  if (event.at > options.now) invalid(event, "timestamp is in the future");
  if (!event.payload.is_object()) invalid(event, "payload must be an object");

  switch (event.kind) {
    case EvidenceKind::kAnswer: ingest_answer(ctx, event, options); break;
    case EvidenceKind::kSurveyItem: ingest_survey(ctx, event, options); break;
    case EvidenceKind::kDialogueTurn:
    case EvidenceKind::kPlatformEvent: ingest_log_event(ctx, event); break;
  }
}

std::vector<EvidenceEvent> read_evidence_jsonl(std::istream& in) {
  std::vector<EvidenceEvent> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    try {
      out.push_back(model::guarded_parse([&] { return json::parse(line).get<EvidenceEvent>(); },
                                         "evidence"));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace lc::temporal
