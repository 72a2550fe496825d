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

#include "lc/store/merge.h"

#include <algorithm>

#include "lc/common/error.h"
#include "lc/model/json.h"
#include "lc/model/validate.h"
#include "lc/store/canonical.h"

namespace lc::store {

namespace {

using nlohmann::json;

// True iff `b` should win over `a`.
template <typename T>
bool later(const T& a, const T& b, Timestamp ta, Timestamp tb, const std::string& sa,
           const std::string& sb) {
  if (ta != tb) return tb > ta;
  if (sa != sb) return sb < sa;
  return json(b).dump() < json(a).dump();
}

template <typename Map, typename Stamp>
Map merge_maps(const Map& local, const Map& remote, Stamp stamp) {
  Map out = local;
  for (const auto& [key, rv] : remote) {
    const auto it = out.find(key);
    if (it == out.end()) {
      out.emplace(key, rv);
      continue;
    }
    const auto& [ta, sa] = stamp(it->second);
    const auto& [tb, sb] = stamp(rv);
    if (later(it->second, rv, ta, tb, sa, sb)) it->second = rv;
  }
  return out;
}

}  // namespace

MergeResult sync_merge(const model::LearnerContext& local, const model::LearnerContext& remote,
                       privacy::AuditChain* audit, std::string_view actor) {
  if (local.learner_id() != remote.learner_id()) {
    throw Error(ErrorCode::kLearnerMismatch,
                "cannot merge " + local.learner_id() + " with " + remote.learner_id());
  }
  if (content_hash(local) == content_hash(remote)) return {local, {}, {}};

  const auto& a = local.parts();
  const auto& b = remote.parts();
  model::LearnerContext::Parts m;
  m.learner_id = a.learner_id;
  m.version = std::max(a.version, b.version) + 1;
  m.clock = std::max(a.clock, b.clock);

  auto node_stamp = [](const model::ContextNode& n) {
    return std::pair{n.metadata.recorded_at, n.metadata.source};
  };
  auto edge_stamp = [](const model::ContextEdge& e) {
    return std::pair{e.metadata.recorded_at, e.metadata.source};
  };
  auto feature_stamp = [](const model::Feature& f) {
    return std::pair{f.updated_at, f.provenance.source};
  };
  m.nodes = merge_maps(a.nodes, b.nodes, node_stamp);
  m.edges = merge_maps(a.edges, b.edges, edge_stamp);

  // Features may sit in different dimension maps only if their keys differ,
  // since the key prefix fixes the dimension.
  std::vector<std::string> conflicts;
  for (std::size_t d = 0; d < m.features.size(); ++d) {
    for (const auto& [key, rf] : b.features[d]) {
      const auto it = a.features[d].find(key);
      if (it != a.features[d].end() && it->second.kind != rf.kind) conflicts.push_back(key);
    }
    m.features[d] = merge_maps(a.features[d], b.features[d], feature_stamp);
  }

  const auto& ba = a.beliefs.provenance;
  const auto& bb = b.beliefs.provenance;
  m.beliefs = later(a.beliefs, b.beliefs, ba.recorded_at, bb.recorded_at, ba.source, bb.source)
                  ? b.beliefs
                  : a.beliefs;

  std::vector<model::EvidenceEvent> all = a.evidence_log;
  all.insert(all.end(), b.evidence_log.begin(), b.evidence_log.end());
  std::vector<std::pair<std::pair<Timestamp, std::string>, const model::EvidenceEvent*>> order;
  order.reserve(all.size());
  for (const auto& e : all) order.push_back({{e.at, json(e).dump()}, &e});
  std::sort(order.begin(), order.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  order.erase(std::unique(order.begin(), order.end(),
                          [](const auto& x, const auto& y) { return x.first == y.first; }),
              order.end());
  for (const auto& [k, e] : order) m.evidence_log.push_back(*e);

  auto merged = model::LearnerContext::from_parts(std::move(m));
  if (auto v = model::validate_schema(merged); !v.empty()) {
    std::string msg = "merged context is invalid";
    for (const auto& x : v) msg += "; " + x.subject + ": " + x.message;
    throw Error(ErrorCode::kPostMergeInvalid, msg);
  }

  if (audit) {
    for (const auto& key : conflicts) {
      audit->append({merged.clock(), std::string(actor), privacy::AuditAction::kMergeConflict,
                     {{"learner_id", merged.learner_id()},
                      {"key", key},
                      {"reason", "trait/state kind disagreement"},
                      {"winner_kind", model::to_string(merged.find_feature(key)->kind)}},
                     ""});
    }
  }
  auto changes = diff(local, merged);
  return {std::move(merged), std::move(changes), std::move(conflicts)};
}

}  // namespace lc::store
