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

#include "lc/temporal/bkt.h"

#include <cmath>
#include <string>

#include "lc/common/error.h"

namespace lc::temporal {

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

void check_params(const BktParams& p) {
  if (!is_probability(p.p_init) || !is_probability(p.p_transit) || !is_probability(p.p_slip) ||
      !is_probability(p.p_guess)) {
    throw Error(ErrorCode::kInvalidParams, "BKT parameters must lie in [0,1]");
  }
  if (p.p_slip + p.p_guess >= 1.0) {
    throw Error(ErrorCode::kInvalidParams, "p_slip + p_guess must be below 1");
  }
}

double bkt_update(double p_mastery, bool correct, const BktParams& params) {
  check_params(params);
  if (!is_probability(p_mastery)) {
    throw Error(ErrorCode::kInvalidProbability,
                "mastery " + std::to_string(p_mastery) + " not in [0,1]");
  }
  const double known = correct ? 1.0 - params.p_slip : params.p_slip;
  const double unknown = correct ? params.p_guess : 1.0 - params.p_guess;
  const double num = p_mastery * known;
  const double den = num + (1.0 - p_mastery) * unknown;
  // den == 0 only for an observation the model rules out (mastered with zero
  // slip answering wrong, or the reverse); the prior is kept unchanged then.
  const double posterior = den > 0.0 ? num / den : p_mastery;
  return posterior + (1.0 - posterior) * params.p_transit;
}

}  // namespace lc::temporal
