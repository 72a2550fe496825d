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

#include "lc/prioritize/selection.h"

#include <algorithm>

#include "lc/common/error.h"
#include "lc/prioritize/information.h"
#include "lc/temporal/decay.h"

namespace lc::prioritize {

namespace {

bool under_prefix(std::string_view key, std::string_view prefix) {
  return key == prefix || (key.size() > prefix.size() && key.substr(0, prefix.size()) == prefix &&
                           key[prefix.size()] == '.');
}

double information_term(const std::vector<OutcomeSample>& samples, int bins) {
  std::vector<double> numeric;
  for (const auto& s : samples) {
    if (const auto* d = std::get_if<double>(&s.feature)) numeric.push_back(*d);
  }
  const auto binned = discretize_equal_width(numeric, bins);
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(samples.size());
  std::size_t next_bin = 0;
  for (const auto& s : samples) {
    if (const auto* c = std::get_if<std::string>(&s.feature)) {
      pairs.emplace_back(*c, s.outcome);
    } else {
      pairs.emplace_back(binned[next_bin++], s.outcome);
    }
  }
  return mutual_information(pairs);
}

// Node ids a feature key mentions: any single segment after the dimension, or
// everything after the second segment.
std::vector<std::string> referenced_nodes(const model::LearnerContext& ctx, std::string_view key) {
  std::vector<std::string> out;
  std::vector<std::string_view> segments;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    segments.push_back(key.substr(start, dot == key.npos ? key.npos : dot - start));
    if (dot == key.npos) break;
    start = dot + 1;
  }
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (ctx.find_node(segments[i])) out.emplace_back(segments[i]);
  }
  if (segments.size() > 2) {
    const auto tail_start = segments[0].size() + segments[1].size() + 2;
    const auto tail = key.substr(tail_start);
    if (ctx.find_node(tail)) out.emplace_back(tail);
  }
  return out;
}

}  // namespace

std::string_view to_string(Task t) {
  switch (t) {
    case Task::kFormativeFeedback: return "formative_feedback";
    case Task::kAssessment: return "assessment";
    case Task::kCollaboration: return "collaboration";
    case Task::kGeneric: return "generic";
  }
  return "?";
}

Task parse_task(std::string_view s) {
  if (s == "formative_feedback") return Task::kFormativeFeedback;
  if (s == "assessment") return Task::kAssessment;
  if (s == "collaboration") return Task::kCollaboration;
  if (s == "generic") return Task::kGeneric;
  throw Error(ErrorCode::kParseError, "unknown task '" + std::string(s) + "'");
}

double task_weight(std::string_view key, Task task, const SelectionConfig& config) {
  const TaskWeightRule* best = nullptr;
  for (const auto& rule : config.rules) {
    if (rule.task != task || !under_prefix(key, rule.key_prefix)) continue;
    if (!best || rule.key_prefix.size() > best->key_prefix.size()) best = &rule;
  }
  return best ? best->weight : 1.0;
}

WorkingContext select_features(const model::LearnerContext& ctx, const OutcomeSamples& samples,
                               int budget, Task task, Timestamp now,
                               const SelectionConfig& config,
                               const std::function<bool(const model::Feature&)>& eligible) {
  if (budget < 1) throw Error(ErrorCode::kInvalidBudget, "budget must be at least 1");

  std::vector<ScoredFeature> scored;
  for (const auto& f : ctx.all_features()) {
    if (eligible && !eligible(f)) continue;
    const auto it = samples.find(f.key);
    const double info = it != samples.end() && !it->second.empty()
                            ? information_term(it->second, config.bins)
                            : config.unsampled_information;
    scored.push_back({f.key, task_weight(f.key, task, config) * info *
                                 temporal::effective_weight(f, now)});
  }
  if (scored.empty()) throw Error(ErrorCode::kNoFeatures, "no candidate features");

  std::sort(scored.begin(), scored.end(), [](const ScoredFeature& a, const ScoredFeature& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.key < b.key;
  });
  if (scored.size() > static_cast<std::size_t>(budget)) scored.resize(budget);

  WorkingContext w;
  w.budget = budget;
  w.features = std::move(scored);
  for (const auto& [id, node] : ctx.nodes()) {
    if (node.kind == model::NodeKind::kLearner) w.nodes.insert(id);
  }
  for (const auto& sf : w.features) {
    for (auto& id : referenced_nodes(ctx, sf.key)) w.nodes.insert(std::move(id));
  }
  for (const auto& [key, edge] : ctx.edges()) {
    if (w.nodes.contains(key.src) && w.nodes.contains(key.dst)) w.edges.push_back(key);
  }
  return w;
}

nlohmann::json to_json(const WorkingContext& w) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : w.features) features.push_back({{"key", f.key}, {"score", f.score}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : w.edges) {
    edges.push_back({{"src", e.src}, {"relation", model::to_string(e.relation)}, {"dst", e.dst}});
  }
  return {{"features", features}, {"nodes", w.nodes}, {"edges", edges}, {"budget", w.budget}};
}

}  // namespace lc::prioritize
