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

#include "lc/store/diff.h"

#include "lc/common/error.h"
#include "lc/model/json.h"
#include "lc/store/canonical.h"

namespace lc::store {

using nlohmann::json;

Entries context_entries(const model::LearnerContext& ctx) {
  Entries out;
  for (const auto& [id, node] : ctx.nodes()) out["node:" + id] = node;
  for (const auto& [k, edge] : ctx.edges()) {
    out["edge:" + k.src + "|" + std::string(model::to_string(k.relation)) + "|" + k.dst] = edge;
  }
  for (const auto& f : ctx.all_features()) out["feature:" + f.key] = f;
  out["beliefs"] = ctx.beliefs();
  out["evidence_log"] = ctx.evidence_log();
  out["meta:version"] = ctx.version();
  out["meta:clock"] = model::timestamp_to_json(ctx.clock());
  return out;
}

model::LearnerContext context_from_entries(const std::string& learner_id, const Entries& entries) {
  json doc = {{"profile", kProfile},
              {"learner_id", learner_id},
              {"nodes", json::array()},
              {"edges", json::array()},
              {"features", json::object()}};
  for (const auto& [id, value] : entries) {
    if (id.starts_with("node:")) {
      doc["nodes"].push_back(value);
    } else if (id.starts_with("edge:")) {
      doc["edges"].push_back(value);
    } else if (id.starts_with("feature:")) {
      doc["features"][id.substr(8)] = value;
    } else if (id == "beliefs" || id == "evidence_log") {
      doc[id] = value;
    } else if (id == "meta:version") {
      doc["version"] = value;
    } else if (id == "meta:clock") {
      doc["clock"] = value;
    } else {
      throw Error(ErrorCode::kInvalidContext, "unknown entry '" + id + "'");
    }
  }
  return context_from_json(doc);
}

ChangeSet diff(const model::LearnerContext& a, const model::LearnerContext& b) {
  if (a.learner_id() != b.learner_id()) {
    throw Error(ErrorCode::kLearnerMismatch,
                "cannot diff " + a.learner_id() + " against " + b.learner_id());
  }
  const auto ea = context_entries(a);
  const auto eb = context_entries(b);
  ChangeSet c;
  for (const auto& [id, old_value] : ea) {
    const auto it = eb.find(id);
    if (it == eb.end()) {
      c.removed.emplace(id, old_value);
    } else if (it->second != old_value) {
      c.modified.emplace(id, std::make_pair(old_value, it->second));
    }
  }
  for (const auto& [id, new_value] : eb) {
    if (!ea.contains(id)) c.added.emplace(id, new_value);
  }
  return c;
}

model::LearnerContext apply(const model::LearnerContext& base, const ChangeSet& changes) {
  auto entries = context_entries(base);
  auto conflict = [](const std::string& id, const char* why) {
    throw Error(ErrorCode::kInvalidArgument, "change to '" + id + "' does not apply: " + why);
  };
  for (const auto& [id, old_value] : changes.removed) {
    const auto it = entries.find(id);
    if (it == entries.end()) conflict(id, "absent");
    if (it->second != old_value) conflict(id, "base differs");
    entries.erase(it);
  }
  for (const auto& [id, values] : changes.modified) {
    const auto it = entries.find(id);
    if (it == entries.end()) conflict(id, "absent");
    if (it->second != values.first) conflict(id, "base differs");
    it->second = values.second;
  }
  for (const auto& [id, value] : changes.added) {
    if (!entries.emplace(id, value).second) conflict(id, "already present");
  }
  return context_from_entries(base.learner_id(), entries);
}

json to_json(const ChangeSet& c) {
  json modified = json::object();
  for (const auto& [id, values] : c.modified) {
    modified[id] = {{"old", values.first}, {"new", values.second}};
  }
  return {{"added", c.added}, {"removed", c.removed}, {"modified", modified}};
}

ChangeSet change_set_from_json(const json& j) {
  return model::guarded_parse(
      [&] {
        ChangeSet c;
        c.added = model::required(j, "added").get<Entries>();
        c.removed = model::required(j, "removed").get<Entries>();
        for (const auto& [id, v] : model::required(j, "modified").items()) {
          c.modified.emplace(id, std::make_pair(model::required(v, "old"),
                                                model::required(v, "new")));
        }
        return c;
      },
      "change set");
}

}  // namespace lc::store
