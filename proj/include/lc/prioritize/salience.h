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

#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lc::prioritize {

enum class MisalignmentReason { kHallucinatedRelevance, kInvisibleTrait };
std::string_view to_string(MisalignmentReason r);

struct Misalignment {
  std::string key;
  MisalignmentReason reason;

  friend bool operator==(const Misalignment&, const Misalignment&) = default;
};

struct SalienceReport {
  std::map<std::string, double> per_feature;  // LOO TVD
  std::map<std::string, double> relevance;    // declared, distractors 0
  std::vector<Misalignment> misaligned;       // sorted by key, then reason
};

inline constexpr double kDefaultMisalignmentThreshold = 0.1;
inline constexpr double kRelevantAt = 0.5;

// hallucinated_relevance: a relevance-0 key whose impact exceeds the impact of
// some key with relevance >= 0.5. invisible_trait: a relevance >= 0.5 key whose
// impact is below `threshold`. Throws Error(kMissingRelevance) when an impact
// key has no declared relevance.
SalienceReport rank_misalignment(const std::map<std::string, double>& per_feature,
                                 const std::map<std::string, double>& relevance,
                                 double threshold = kDefaultMisalignmentThreshold);

nlohmann::json to_json(const SalienceReport& r);

}  // namespace lc::prioritize
