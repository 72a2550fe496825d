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

#include "lc/protocol/service.h"

#include <stdlib.h>

#include <algorithm>
#include <set>

#include "lc/common/error.h"
#include "lc/model/json.h"
#include "lc/temporal/evidence.h"

namespace lc::protocol {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json object_schema(json properties, std::vector<std::string> required) {
  return {{"type", "object"}, {"properties", std::move(properties)}, {"required", required}};
}

std::vector<ToolDescriptor> make_descriptors() {
  const json purpose = {{"type", "string"}, {"enum", {"instruction", "research"}}};
  const json task = {{"type", "string"},
                     {"enum", {"formative_feedback", "assessment", "collaboration", "generic"}}};
  return {
      {"get_context_snapshot",
       "Budgeted, privacy-filtered working context for one learner: the most salient features "
       "(blurred per policy), disclosable misconceptions and profile, and the digest of the "
       "context version it was built from.",
       object_schema({{"learner_id", {{"type", "string"}}},
                      {"purpose", purpose},
                      {"task", task},
                      {"budget", {{"type", "integer"}, {"minimum", 1}}},
                      {"include_aggregates", {{"type", "boolean"}}},
                      {"actor", {{"type", "string"}}}},
                     {"learner_id", "budget"})},
      {"push_evidence",
       "Apply learner evidence (answers, survey items, dialogue turns, platform events) in "
       "order. Invalid events are rejected individually; the rest are applied.",
       object_schema({{"learner_id", {{"type", "string"}}},
                      {"events", {{"type", "array"}, {"items", {{"type", "object"}}}}},
                      {"actor", {{"type", "string"}}}},
                     {"learner_id", "events"})},
      {"probe_fidelity",
       "Serve a snapshot of a fabricated context in an isolated store and check it includes, "
       "excludes and blurs exactly what the policy dictates.",
       object_schema({{"probe_id", {{"type", "string"}}},
                      {"fixture", {{"type", "object"}}},
                      {"request", {{"type", "object"}}},
                      {"policy", {{"type", "object"}}},
                      {"must_include", {{"type", "array"}, {"items", {{"type", "string"}}}}},
                      {"must_exclude", {{"type", "array"}, {"items", {{"type", "string"}}}}},
                      {"required_levels", {{"type", "object"}}},
                      {"expect_error", {{"type", "string"}}}},
                     {"probe_id", "fixture"})},
  };
}

model::LearnerContext fixture_from_json(const json& j) {
  if (j.contains("profile")) return store::context_from_json(j);
  // Shorthand: {learner_id, at?, features?: [Feature], beliefs?: BeliefModel}
  return model::guarded_parse(
      [&] {
        const auto at = j.contains("at") ? model::timestamp_from_json(j.at("at")) : Timestamp{};
        auto ctx = model::LearnerContext::create(model::required_string(j, "learner_id"), at);
        for (const auto& f : j.value("features", json::array())) ctx.set_feature(f.get<model::Feature>());
        if (j.contains("beliefs")) ctx.attach_belief(j.at("beliefs").get<model::BeliefModel>());
        return ctx;
      },
      "fixture");
}

fs::path make_temp_dir() {
  auto pattern = (fs::temp_directory_path() / "lc-probe-XXXXXX").string();
  if (!mkdtemp(pattern.data())) throw Error(ErrorCode::kStorageFailure, "cannot create probe store");
  return pattern;
}

}  // namespace

const std::vector<ToolDescriptor>& tool_descriptors() {
  static const auto kTools = make_descriptors();
  return kTools;
}

json to_json(const ToolDescriptor& t) {
  return {{"name", t.name}, {"description", t.description}, {"inputSchema", t.input_schema}};
}

json to_json(const PushAck& a) {
  json rejected = json::array();
  for (const auto& r : a.rejected) {
    rejected.push_back({{"index", r.index}, {"error", r.error}, {"message", r.message}});
  }
  return {{"accepted", a.accepted},
          {"rejected", rejected},
          {"version", a.version},
          {"context_digest", {{"algorithm", a.context_digest.algorithm}, {"hex", a.context_digest.hex}}}};
}

FidelityProbe probe_from_json(const json& j) {
  try {
    FidelityProbe p;
    model::guarded_parse(
        [&] {
          if (!j.is_object()) throw Error(ErrorCode::kInvalidProbe, "probe must be an object");
          p.probe_id = model::required_string(j, "probe_id");
          p.fixture = fixture_from_json(model::required(j, "fixture"));
          json req = j.value("request", json::object());
          req["learner_id"] = p.fixture.learner_id();
          if (!req.contains("budget")) req["budget"] = 5;
          p.request = snapshot_request_from_json(req);
          if (j.contains("policy")) p.policy = privacy::policy_from_json(j.at("policy"));
          p.must_include = j.value("must_include", std::vector<std::string>{});
          p.must_exclude = j.value("must_exclude", std::vector<std::string>{});
          const json levels = j.value("required_levels", json::object());
          for (const auto& [k, v] : levels.items()) {
            p.required_levels.emplace(k, privacy::parse_granularity(v.get<std::string>()));
          }
          if (j.contains("expect_error")) p.expect_error = j.at("expect_error").get<std::string>();
          return 0;
        },
        "probe");
    std::vector<std::string> named = p.must_include;
    named.insert(named.end(), p.must_exclude.begin(), p.must_exclude.end());
    for (const auto& [k, level] : p.required_levels) named.push_back(k);
    for (const auto& k : named) {
      if (!p.fixture.find_feature(k)) {
        throw Error(ErrorCode::kInvalidProbe, "assertion names '" + k + "', absent from the fixture");
      }
    }
    return p;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidProbe) throw;
    throw Error(ErrorCode::kInvalidProbe, e.what());
  }
}

json to_json(const ProbeReport& r) {
  return {{"probe_id", r.probe_id},
          {"passed", r.passed},
          {"failures", r.failures},
          {"error", r.error ? json(*r.error) : json()}};
}

LcService::LcService(fs::path store_root, ServingConfig config, std::shared_ptr<const Clock> clock)
    : store_(std::move(store_root)), config_(std::move(config)), clock_(std::move(clock)) {
  privacy::check_policy(config_.policy);
}

LcService::LearnerState& LcService::state(const std::string& learner_id) {
  std::lock_guard lock(states_mu_);
  auto& slot = states_[learner_id];
  if (!slot) slot = std::make_unique<LearnerState>();
  return *slot;
}

privacy::AuditChain& LcService::audit_for(LearnerState& s, const std::string& learner_id) {
  if (!s.audit) s.audit = privacy::AuditChain::open(store_.learner_dir(learner_id) / "audit.jsonl");
  return *s.audit;
}

privacy::PrivacyBudget& LcService::budget_for(LearnerState& s, const std::string& learner_id) {
  if (!s.budget) {
    const auto path = store_.learner_dir(learner_id) / "budget.json";
    privacy::PrivacyBudget b{learner_id, config_.epsilon_total, 0.0};
    std::error_code ec;
    if (fs::exists(path, ec)) {
      const auto j = model::guarded_parse([&] { return json::parse(store::read_file(path)); },
                                          path.string());
      b.epsilon_total = j.value("epsilon_total", b.epsilon_total);
      b.epsilon_spent = j.value("epsilon_spent", 0.0);
    }
    s.budget = b;
  }
  return *s.budget;
}

void LcService::persist_budget(const privacy::PrivacyBudget& b) {
  const json j = {{"learner_id", b.learner_id},
                  {"epsilon_total", b.epsilon_total},
                  {"epsilon_spent", b.epsilon_spent}};
  store::write_atomically(store_.learner_dir(b.learner_id) / "budget.json", j.dump());
}

model::LearnerContext LcService::load_or_not_found(const std::string& learner_id) {
  if (!store_.has_learner(learner_id)) {
    throw Error(ErrorCode::kLearnerNotFound, "no context for learner '" + learner_id + "'");
  }
  return store_.load_latest(learner_id);
}

ContextSnapshot LcService::get_context_snapshot(const SnapshotRequest& request) {
  if (request.budget < 1) throw Error(ErrorCode::kInvalidBudget, "budget must be at least 1");
  auto& s = state(request.learner_id);
  std::lock_guard lock(s.mu);
  const auto ctx = load_or_not_found(request.learner_id);
  auto& audit = audit_for(s, request.learner_id);
  auto budget = budget_for(s, request.learner_id);
  auto snap = build_snapshot(ctx, request, config_, clock_->now(), &budget, &audit);
  if (budget != *s.budget) {
    persist_budget(budget);
    s.budget = budget;
  }
  return snap;
}

PushAck LcService::push_evidence(const std::string& learner_id, const std::vector<json>& events,
                                 const std::string& actor) {
  auto& s = state(learner_id);
  std::lock_guard lock(s.mu);
  auto ctx = load_or_not_found(learner_id);
  const temporal::IngestOptions options{config_.bkt, config_.temporal, clock_->now()};

  PushAck ack;
  for (std::size_t i = 0; i < events.size(); ++i) {
    try {
      auto raw = events[i];
      if (raw.is_object() && !raw.contains("learner_id")) raw["learner_id"] = learner_id;
      const auto event = model::guarded_parse(
          [&] {
            if (!raw.is_object()) throw Error(ErrorCode::kInvalidEvent, "event must be an object");
            return raw.get<model::EvidenceEvent>();
          },
          "event");
      auto next = ctx;
      temporal::ingest_evidence(next, event, options);
      ctx = std::move(next);
      ++ack.accepted;
    } catch (const Error& e) {
      const auto code = e.code() == ErrorCode::kParseError ? ErrorCode::kInvalidEvent : e.code();
      ack.rejected.push_back({i, std::string(to_string(code)), e.what()});
    }
  }
  if (ack.accepted > 0) store_.save(ctx);
  ack.version = ctx.version();
  ack.context_digest = store::content_hash(ctx);

  json rejected = json::array();
  for (const auto& r : ack.rejected) rejected.push_back({{"index", r.index}, {"error", r.error}});
  audit_for(s, learner_id)
      .append({options.now, actor, privacy::AuditAction::kEvidencePushed,
               {{"learner_id", learner_id},
                {"accepted", ack.accepted},
                {"rejected", rejected},
                {"version", ack.version},
                {"context_digest", ack.context_digest.hex}},
               ""});
  return ack;
}

ProbeReport LcService::probe_fidelity(const FidelityProbe& probe) {
  ProbeReport report{probe.probe_id, false, {}, std::nullopt};
  const auto dir = make_temp_dir();
  std::optional<ContextSnapshot> snap;
  try {
    auto config = config_;
    if (probe.policy) config.policy = *probe.policy;
    LcService isolated(dir, config, clock_);
    isolated.store().save(probe.fixture);
    auto request = probe.request;
    request.learner_id = probe.fixture.learner_id();
    try {
      snap = isolated.get_context_snapshot(request);
    } catch (const Error& e) {
      report.error = std::string(to_string(e.code()));
    }
  } catch (...) {
    std::error_code ec;
    fs::remove_all(dir, ec);
    throw;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);

  auto& fail = report.failures;
  if (probe.expect_error) {
    if (!report.error) {
      fail.push_back("expect_error: wanted " + *probe.expect_error + ", got a snapshot");
    } else if (*report.error != *probe.expect_error) {
      fail.push_back("expect_error: wanted " + *probe.expect_error + ", got " + *report.error);
    }
  } else if (report.error) {
    fail.push_back("snapshot failed with " + *report.error);
  }

  if (snap) {
    std::map<std::string, const WorkingEntry*> served;
    for (const auto& w : snap->working) served.emplace(w.key, &w);
    for (const auto& k : probe.must_include) {
      if (!served.contains(k)) fail.push_back("must_include: '" + k + "' not served");
    }
    for (const auto& k : probe.must_exclude) {
      if (served.contains(k)) fail.push_back("must_exclude: '" + k + "' served");
    }
    for (const auto& [k, level] : probe.required_levels) {
      const auto it = served.find(k);
      if (it == served.end()) {
        fail.push_back("required_levels: '" + k + "' not served");
      } else if (it->second->granularity != level) {
        fail.push_back("required_levels: '" + k + "' served at " +
                       std::string(privacy::to_string(it->second->granularity)) + ", wanted " +
                       std::string(privacy::to_string(level)));
      }
    }
    // Nothing may be served that the fixture does not hold.
    const auto& blur = config_.blur;
    for (const auto& w : snap->working) {
      const auto* f = probe.fixture.find_feature(w.key);
      if (!f || privacy::blur_value(f->value, w.granularity, blur) != w.value) {
        fail.push_back("fabricated: '" + w.key + "' has no matching fixture value");
      }
    }
  } else if (!probe.must_include.empty() || !probe.required_levels.empty()) {
    if (!probe.expect_error) fail.push_back("no snapshot to check inclusions against");
  }
  report.passed = fail.empty();
  return report;
}

std::vector<privacy::AuditRecord> LcService::audit_records(const std::string& learner_id) {
  auto& s = state(learner_id);
  std::lock_guard lock(s.mu);
  if (!store_.has_learner(learner_id)) return {};
  return audit_for(s, learner_id).records();
}

privacy::PrivacyBudget LcService::budget(const std::string& learner_id) {
  auto& s = state(learner_id);
  std::lock_guard lock(s.mu);
  load_or_not_found(learner_id);
  return budget_for(s, learner_id);
}

}  // namespace lc::protocol
