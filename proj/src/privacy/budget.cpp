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

#include "lc/privacy/budget.h"

#include <cmath>

#include "lc/common/error.h"
#include "lc/common/random.h"

namespace lc::privacy {

PrivacyBudget charge_budget(const PrivacyBudget& budget, double query_epsilon) {
  if (!(query_epsilon > 0.0) || !std::isfinite(query_epsilon)) {
    throw Error(ErrorCode::kNonPositiveEpsilon, "query epsilon must be positive and finite");
  }
  const double spent = budget.epsilon_spent + query_epsilon;
  if (spent > budget.epsilon_total) {
    throw Error(ErrorCode::kBudgetExhausted,
                "charging " + std::to_string(query_epsilon) + " would exceed the total of " +
                    std::to_string(budget.epsilon_total) + " (spent " +
                    std::to_string(budget.epsilon_spent) + ")");
  }
  PrivacyBudget out = budget;
  out.epsilon_spent = spent;
  return out;
}

double laplace_scale_for_count(double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kNonPositiveEpsilon, "epsilon must be positive");
  constexpr double kSensitivity = 1.0;
  return kSensitivity / epsilon;
}

LaplaceNoise::LaplaceNoise(double scale, std::uint64_t seed) : scale_(scale), state_(seed) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kInvalidArgument, "Laplace scale must be finite and non-negative");
  }
}

double LaplaceNoise::sample() {
  // Inverse CDF on u in (-1/2, 1/2).
  state_ = splitmix64(state_);
  double u = static_cast<double>(state_ >> 11) * 0x1.0p-53 - 0.5;
  if (u == -0.5) u = 0.0;
  const double sign = u < 0 ? -1.0 : 1.0;
  return -scale_ * sign * std::log1p(-2.0 * std::abs(u));
}

double dp_noisy_count(std::int64_t true_count, double epsilon, std::uint64_t rng_seed) {
  if (true_count < 0) throw Error(ErrorCode::kInvalidArgument, "count must be non-negative");
  LaplaceNoise noise(laplace_scale_for_count(epsilon), rng_seed);
  return static_cast<double>(true_count) + noise.sample();
}

}  // namespace lc::privacy
