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

namespace lc::temporal {

// Bayesian knowledge tracing parameters for one skill.
struct BktParams {
  double p_init = 0.3;     // P(L0)
  double p_transit = 0.1;  // P(T), learning rate
  double p_slip = 0.1;
  double p_guess = 0.2;
};

// Throws Error(kInvalidParams) unless every parameter is a probability and
// p_slip + p_guess < 1.
void check_params(const BktParams& params);

// One BKT step: posterior of mastery given the observed outcome, followed by
// the learning transition post + (1 - post) * p_transit.
double bkt_update(double p_mastery, bool correct, const BktParams& params);

}  // namespace lc::temporal
