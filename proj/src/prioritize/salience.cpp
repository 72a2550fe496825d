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

#include "lc/prioritize/salience.h"

#include <algorithm>
#include <limits>

#include "lc/common/error.h"

namespace lc::prioritize {

std::string_view to_string(MisalignmentReason r) {
  switch (r) {
    case MisalignmentReason::kHallucinatedRelevance: return "hallucinated_relevance";
    case MisalignmentReason::kInvisibleTrait: return "invisible_trait";
  }
  return "?";
}

SalienceReport rank_misalignment(const std::map<std::string, double>& per_feature,
                                 const std::map<std::string, double>& relevance,
                                 double threshold) {
  SalienceReport report{per_feature, {}, {}};
  for (const auto& [key, impact] : per_feature) {
    const auto it = relevance.find(key);
    if (it == relevance.end()) {
      throw Error(ErrorCode::kMissingRelevance, "no declared relevance for '" + key + "'");
    }
    report.relevance.emplace(key, it->second);
  }

  double weakest_relevant = std::numeric_limits<double>::infinity();
  for (const auto& [key, impact] : per_feature) {
    if (report.relevance.at(key) >= kRelevantAt) weakest_relevant = std::min(weakest_relevant, impact);
  }

  for (const auto& [key, impact] : per_feature) {
    const double rel = report.relevance.at(key);
    if (rel == 0.0 && impact > weakest_relevant) {
      report.misaligned.push_back({key, MisalignmentReason::kHallucinatedRelevance});
    }
    if (rel >= kRelevantAt && impact < threshold) {
      report.misaligned.push_back({key, MisalignmentReason::kInvisibleTrait});
    }
  }
  return report;
}

nlohmann::json to_json(const SalienceReport& r) {
  nlohmann::json flags = nlohmann::json::array();
  for (const auto& m : r.misaligned) flags.push_back({{"key", m.key}, {"reason", to_string(m.reason)}});
  return {{"per_feature", r.per_feature}, {"relevance", r.relevance}, {"misaligned", flags}};
}

}  // namespace lc::prioritize
