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

#include "lc/prioritize/distribution.h"

#include <cmath>
#include <set>

#include "lc/common/error.h"
#include "lc/model/json.h"

namespace lc::prioritize {

Distribution Distribution::from_counts(const std::vector<std::string>& support,
                                       const std::vector<double>& counts) {
  if (support.size() != counts.size()) {
    throw Error(ErrorCode::kInvalidDistribution, "support and counts differ in length");
  }
  double total = 0;
  for (const double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::kInvalidDistribution, "counts must be finite and non-negative");
    }
    total += c;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidDistribution, "counts sum to zero");
  Distribution d{support, {}};
  d.probs.reserve(counts.size());
  for (const double c : counts) d.probs.push_back(c / total);
  return d;
}

void check_distribution(const Distribution& d) {
  if (d.support.size() != d.probs.size()) {
    throw Error(ErrorCode::kInvalidDistribution, "support and probs differ in length");
  }
  std::set<std::string> labels;
  double sum = 0;
  for (std::size_t i = 0; i < d.probs.size(); ++i) {
    if (!labels.insert(d.support[i]).second) {
      throw Error(ErrorCode::kInvalidDistribution, "duplicate label '" + d.support[i] + "'");
    }
    if (!(d.probs[i] >= 0.0) || !std::isfinite(d.probs[i])) {
      throw Error(ErrorCode::kInvalidDistribution, "probability for '" + d.support[i] + "' is invalid");
    }
    sum += d.probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidDistribution, "probabilities sum to " + std::to_string(sum));
  }
}

double tvd(const Distribution& p, const Distribution& q) {
  check_distribution(p);
  check_distribution(q);
  std::map<std::string, std::pair<double, double>> joint;
  for (std::size_t i = 0; i < p.support.size(); ++i) joint[p.support[i]].first = p.probs[i];
  for (std::size_t i = 0; i < q.support.size(); ++i) joint[q.support[i]].second = q.probs[i];
  double sum = 0;
  for (const auto& [label, pq] : joint) sum += std::abs(pq.first - pq.second);
  return std::min(1.0, 0.5 * sum);
}

std::map<std::string, double> loo_impact(const Distribution& full,
                                         const std::map<std::string, Distribution>& variants) {
  try {
    check_distribution(full);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidDistribution, std::string("full-context distribution: ") + e.what());
  }
  std::map<std::string, double> out;
  for (const auto& [key, variant] : variants) {
    try {
      out.emplace(key, tvd(full, variant));
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidDistribution, "variant '" + key + "': " + e.what());
    }
  }
  return out;
}

nlohmann::json to_json(const Distribution& d) {
  return {{"support", d.support}, {"probs", d.probs}};
}

Distribution distribution_from_json(const nlohmann::json& j) {
  return model::guarded_parse(
      [&] {
        auto support = model::required(j, "support").get<std::vector<std::string>>();
        if (j.contains("counts")) {
          return Distribution::from_counts(support, j.at("counts").get<std::vector<double>>());
        }
        Distribution d{std::move(support), model::required(j, "probs").get<std::vector<double>>()};
        check_distribution(d);
        return d;
      },
      "distribution");
}

}  // namespace lc::prioritize
