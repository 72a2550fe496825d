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

#include "lc/protocol/snapshot.h"

#include <algorithm>
#include <map>
#include <set>

#include "lc/common/error.h"
#include "lc/common/random.h"
#include "lc/model/json.h"

namespace lc::protocol {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

bool denied_by_pattern(const privacy::DisclosurePolicy& policy, std::string_view key) {
  return std::any_of(policy.deny_keys.begin(), policy.deny_keys.end(),
                     [&](const std::string& p) { return privacy::key_matches(p, key); });
}

// Beliefs travel when their consent equals the purpose. Components matched by
// a deny pattern are dropped, and profile levels are withheld entirely when
// the policy redacts high-sensitivity data.
std::optional<model::BeliefModel> disclosable_beliefs(const model::BeliefModel& b,
                                                      const privacy::DisclosurePolicy& policy,
                                                      model::ConsentScope purpose) {
  if (b.misconceptions.empty() && b.profile.empty()) return std::nullopt;
  if (purpose == model::ConsentScope::kNone || !policy.allowed_purposes.contains(purpose) ||
      b.provenance.consent_scope != purpose) {
    return std::nullopt;
  }
  model::BeliefModel out;
  out.provenance = b.provenance;
  if (!denied_by_pattern(policy, kBeliefMisconceptionsKey)) out.misconceptions = b.misconceptions;
  if (policy.level_for(model::Sensitivity::kHigh) != privacy::GranularityLevel::kRedact) {
    for (const auto& [attr, level] : b.profile) {
      if (!denied_by_pattern(policy, std::string(kBeliefProfilePrefix) + attr)) {
        out.profile.emplace(attr, level);
      }
    }
  }
  if (out.misconceptions.empty() && out.profile.empty()) return std::nullopt;
  return out;
}

}  // namespace

json to_json(const ServingConfig& c) {
  json rules = json::array();
  for (const auto& r : c.selection.rules) {
    rules.push_back({{"task", prioritize::to_string(r.task)},
                     {"key_prefix", r.key_prefix},
                     {"weight", r.weight}});
  }
  json buckets = json::array();
  for (const auto& b : c.blur.integer_buckets) {
    buckets.push_back({{"lo", b.lo}, {"hi", b.hi ? json(*b.hi) : json()}, {"label", b.label}});
  }
  return {
      {"policy", privacy::to_json(c.policy)},
      {"blur",
       {{"integer_buckets", buckets},
        {"real_step", c.blur.real_step},
        {"real_scale", {c.blur.real_scale_lo, c.blur.real_scale_hi}},
        {"integer_scale", {c.blur.integer_scale_lo, c.blur.integer_scale_hi}}}},
      {"selection",
       {{"rules", rules},
        {"unsampled_information", c.selection.unsampled_information},
        {"bins", c.selection.bins}}},
      {"temporal",
       {{"state_lambda", c.temporal.state_lambda},
        {"trait_lambda", c.temporal.trait_lambda},
        {"floor", c.temporal.floor}}},
      {"bkt",
       {{"p_init", c.bkt.p_init},
        {"p_transit", c.bkt.p_transit},
        {"p_slip", c.bkt.p_slip},
        {"p_guess", c.bkt.p_guess}}},
      {"privacy",
       {{"epsilon_total", c.epsilon_total},
        {"aggregate_epsilon", c.aggregate_epsilon},
        {"noise_seed", c.noise_seed}}},
  };
}

ServingConfig serving_config_from_json(const json& j) {
  ServingConfig c;
  model::guarded_parse(
      [&] {
        if (!j.is_object()) throw Error(ErrorCode::kParseError, "config must be an object");
        if (j.contains("policy")) c.policy = privacy::policy_from_json(j.at("policy"));
        if (j.contains("blur")) {
          const auto& b = j.at("blur");
          if (b.contains("integer_buckets")) {
            c.blur.integer_buckets.clear();
            for (const auto& x : b.at("integer_buckets")) {
              privacy::IntegerBucket bucket{x.at("lo").get<std::int64_t>(), std::nullopt,
                                            x.at("label").get<std::string>()};
              if (x.contains("hi") && !x.at("hi").is_null()) bucket.hi = x.at("hi").get<std::int64_t>();
              c.blur.integer_buckets.push_back(std::move(bucket));
            }
          }
          c.blur.real_step = b.value("real_step", c.blur.real_step);
          if (b.contains("real_scale")) {
            c.blur.real_scale_lo = b.at("real_scale").at(0).get<double>();
            c.blur.real_scale_hi = b.at("real_scale").at(1).get<double>();
          }
          if (b.contains("integer_scale")) {
            c.blur.integer_scale_lo = b.at("integer_scale").at(0).get<double>();
            c.blur.integer_scale_hi = b.at("integer_scale").at(1).get<double>();
          }
        }
        if (j.contains("selection")) {
          const auto& s = j.at("selection");
          if (s.contains("rules")) {
            c.selection.rules.clear();
            for (const auto& r : s.at("rules")) {
              c.selection.rules.push_back({prioritize::parse_task(r.at("task").get<std::string>()),
                                           r.at("key_prefix").get<std::string>(),
                                           r.at("weight").get<double>()});
            }
          }
          c.selection.unsampled_information =
              s.value("unsampled_information", c.selection.unsampled_information);
          c.selection.bins = s.value("bins", c.selection.bins);
        }
        if (j.contains("temporal")) {
          const auto& t = j.at("temporal");
          c.temporal.state_lambda = t.value("state_lambda", c.temporal.state_lambda);
          c.temporal.trait_lambda = t.value("trait_lambda", c.temporal.trait_lambda);
          c.temporal.floor = t.value("floor", c.temporal.floor);
        }
        if (j.contains("bkt")) {
          const auto& b = j.at("bkt");
          c.bkt.p_init = b.value("p_init", c.bkt.p_init);
          c.bkt.p_transit = b.value("p_transit", c.bkt.p_transit);
          c.bkt.p_slip = b.value("p_slip", c.bkt.p_slip);
          c.bkt.p_guess = b.value("p_guess", c.bkt.p_guess);
          temporal::check_params(c.bkt);
        }
        if (j.contains("privacy")) {
          const auto& p = j.at("privacy");
          c.epsilon_total = p.value("epsilon_total", c.epsilon_total);
          c.aggregate_epsilon = p.value("aggregate_epsilon", c.aggregate_epsilon);
          c.noise_seed = p.value("noise_seed", c.noise_seed);
        }
        return 0;
      },
      "serving config");
  privacy::check_policy(c.policy);
  if (!(c.epsilon_total > 0) || !(c.aggregate_epsilon > 0)) {
    throw Error(ErrorCode::kNonPositiveEpsilon, "epsilon settings must be positive");
  }
  return c;
}

SnapshotRequest snapshot_request_from_json(const json& args) {
  return model::guarded_parse(
      [&] {
        if (!args.is_object()) throw Error(ErrorCode::kInvalidArgument, "arguments must be an object");
        SnapshotRequest r;
        r.learner_id = model::required_string(args, "learner_id");
        r.purpose = model::parse_consent_scope(args.value("purpose", std::string("instruction")));
        r.task = prioritize::parse_task(args.value("task", std::string("generic")));
        const auto& budget = model::required(args, "budget");
        if (!budget.is_number_integer()) {
          throw Error(ErrorCode::kInvalidArgument, "budget must be an integer");
        }
        r.budget = budget.get<int>();
        r.include_aggregates = args.value("include_aggregates", false);
        r.actor = args.value("actor", std::string("lc"));
        return r;
      },
      "snapshot request");
}

json to_json(const ContextSnapshot& s) {
  json working = json::array();
  for (const auto& w : s.working) {
    working.push_back({{"key", w.key},
                       {"value", w.value},
                       {"kind", model::to_string(w.kind)},
                       {"dimension", model::to_string(w.dimension)},
                       {"confidence", w.confidence},
                       {"score", w.score},
                       {"granularity", privacy::to_string(w.granularity)}});
  }
  json edges = json::array();
  for (const auto& e : s.subgraph_edges) {
    edges.push_back({{"src", e.src}, {"relation", model::to_string(e.relation)}, {"dst", e.dst}});
  }
  json aggregates = json::array();
  for (const auto& a : s.aggregates) {
    aggregates.push_back(
        {{"name", a.name}, {"value", a.value}, {"epsilon", a.epsilon}, {"scale", a.scale}});
  }
  return {{"learner_id", s.learner_id},
          {"generated_at", model::timestamp_to_json(s.generated_at)},
          {"working", working},
          {"beliefs", s.beliefs ? json(*s.beliefs) : json()},
          {"budget_used", s.budget_used},
          {"context_digest", {{"algorithm", s.context_digest.algorithm}, {"hex", s.context_digest.hex}}},
          {"context_version", s.context_version},
          {"subgraph", {{"nodes", s.subgraph_nodes}, {"edges", edges}}},
          {"aggregates", aggregates}};
}

ContextSnapshot build_snapshot(const model::LearnerContext& ctx, const SnapshotRequest& request,
                               const ServingConfig& config, Timestamp now,
                               privacy::PrivacyBudget* budget, privacy::AuditChain* audit) {
  if (request.budget < 1) throw Error(ErrorCode::kInvalidBudget, "budget must be at least 1");

  ContextSnapshot snap;
  snap.learner_id = ctx.learner_id();
  snap.generated_at = now;
  snap.context_digest = store::content_hash(ctx);
  snap.context_version = ctx.version();

  auto view = ctx;
  temporal::prune_forgotten(view, now, nullptr, request.actor, config.temporal.limits());

  std::vector<std::string> keys;
  for (const auto& f : view.all_features()) keys.push_back(f.key);
  const auto auth = privacy::authorize_query(config.policy, request.purpose, keys, view, now,
                                             audit, request.actor);
  if (auth.allowed.empty()) {
    throw Error(ErrorCode::kEmptyAfterFiltering,
                std::to_string(keys.size()) + " candidate feature(s), none disclosable");
  }
  const std::map<std::string, privacy::GranularityLevel> levels(auth.allowed.begin(),
                                                                auth.allowed.end());

  const auto selected = prioritize::select_features(
      view, {}, request.budget, request.task, now, config.selection,
      [&](const model::Feature& f) { return levels.contains(f.key); });

  for (const auto& sf : selected.features) {
    const auto& f = *view.find_feature(sf.key);
    const auto level = levels.at(sf.key);
    snap.working.push_back({f.key, privacy::blur_value(f.value, level, config.blur), f.kind,
                            f.dimension, temporal::effective_weight(f, now), sf.score, level});
  }
  snap.budget_used = static_cast<int>(snap.working.size());
  snap.subgraph_nodes.assign(selected.nodes.begin(), selected.nodes.end());
  snap.subgraph_edges = selected.edges;
  snap.beliefs = disclosable_beliefs(view.beliefs(), config.policy, request.purpose);

  if (request.include_aggregates) {
    if (!budget) throw Error(ErrorCode::kBudgetExhausted, "no privacy budget available");
    *budget = privacy::charge_budget(*budget, config.aggregate_epsilon);
    const auto seed = derive_seed(config.noise_seed,
                                  {fnv1a(ctx.learner_id()), ctx.version(),
                                   static_cast<std::uint64_t>(budget->epsilon_spent * 1e9)});
    const auto count = static_cast<std::int64_t>(view.evidence_log().size());
    snap.aggregates.push_back({"evidence_count",
                               privacy::dp_noisy_count(count, config.aggregate_epsilon, seed),
                               config.aggregate_epsilon,
                               privacy::laplace_scale_for_count(config.aggregate_epsilon)});
    if (audit) {
      audit->append({now, request.actor, privacy::AuditAction::kBudgetCharged,
                     {{"learner_id", ctx.learner_id()},
                      {"epsilon", config.aggregate_epsilon},
                      {"epsilon_spent", budget->epsilon_spent},
                      {"epsilon_total", budget->epsilon_total}},
                     ""});
    }
  }

  if (audit) {
    json served = json::array();
    for (const auto& w : snap.working) served.push_back(w.key);
    audit->append({now, request.actor, privacy::AuditAction::kSnapshotServed,
                   {{"learner_id", ctx.learner_id()},
                    {"purpose", model::to_string(request.purpose)},
                    {"task", prioritize::to_string(request.task)},
                    {"budget", request.budget},
                    {"served", served},
                    {"context_digest", snap.context_digest.hex},
                    {"context_version", ctx.version()}},
                   ""});
  }
  return snap;
}

}  // namespace lc::protocol
