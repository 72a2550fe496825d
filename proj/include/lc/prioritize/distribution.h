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

// Categorical distribution over labelled outcomes (e.g. tutoring strategies).
struct Distribution {
  std::vector<std::string> support;
  std::vector<double> probs;

  // From non-negative counts, normalized by their sum.
  static Distribution from_counts(const std::vector<std::string>& support,
                                  const std::vector<double>& counts);
};

// Throws Error(kInvalidDistribution): sizes differ, duplicate labels, negative
// or non-finite entries, or a sum further than 1e-9 from 1.
void check_distribution(const Distribution& d);

// Total variation distance 1/2 * sum |p_i - q_i| over the union of both
// supports; labels missing from one side carry probability 0 there.
double tvd(const Distribution& p, const Distribution& q);

// Leave-one-out impact: TVD between the full-context distribution and the
// distribution observed with each key withheld. Output keys = variant keys.
std::map<std::string, double> loo_impact(const Distribution& full,
                                         const std::map<std::string, Distribution>& variants);

nlohmann::json to_json(const Distribution& d);
// Accepts {support, probs} or {support, counts}.
Distribution distribution_from_json(const nlohmann::json& j);

}  // namespace lc::prioritize
