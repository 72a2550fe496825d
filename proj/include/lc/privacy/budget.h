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

#include <cstdint>
#include <string>

namespace lc::privacy {

// Sequential-composition epsilon accountant for one learner.
struct PrivacyBudget {
  std::string learner_id;
  double epsilon_total = 1.0;
  double epsilon_spent = 0.0;

  double remaining() const { return epsilon_total - epsilon_spent; }
  friend bool operator==(const PrivacyBudget&, const PrivacyBudget&) = default;
};

// Returns the budget after charging `query_epsilon`. Throws
// Error(kNonPositiveEpsilon) for query_epsilon <= 0 and Error(kBudgetExhausted)
// if the charge would overspend; the input is never modified.
PrivacyBudget charge_budget(const PrivacyBudget& budget, double query_epsilon);

// Zero-mean Laplace noise with the given scale, reproducible under a seed.
class LaplaceNoise {
 public:
  LaplaceNoise(double scale, std::uint64_t seed);

  double scale() const { return scale_; }
  double sample();

 private:
  double scale_;
  std::uint64_t state_;
};

// Laplace mechanism for a counting query (sensitivity 1): scale = 1 / epsilon.
// The caller charges the budget first.
double dp_noisy_count(std::int64_t true_count, double epsilon, std::uint64_t rng_seed);

// Scale the mechanism uses for a counting query at `epsilon`.
double laplace_scale_for_count(double epsilon);

}  // namespace lc::privacy
