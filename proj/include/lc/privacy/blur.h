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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lc/model/types.h"

namespace lc::privacy {

// Totally ordered from most to least informative.
enum class GranularityLevel { kExact = 0, kCoarse = 1, kCategory = 2, kRedact = 3 };

std::string_view to_string(GranularityLevel g);
GranularityLevel parse_granularity(std::string_view s);

inline constexpr std::string_view kRedacted = "REDACTED";

struct IntegerBucket {
  std::int64_t lo = 0;
  std::optional<std::int64_t> hi;  // inclusive; nullopt = open-ended
  std::string label;
};

struct BlurConfig {
  std::vector<IntegerBucket> integer_buckets = {
      {0, 12, "[0-12]"}, {13, 18, "[13-18]"}, {19, 25, "[19-25]"}, {26, std::nullopt, "[26+]"}};
  // Probabilities and reals snap to multiples of this step at the coarse level.
  double real_step = 0.1;
  // Scales whose thirds define the low/medium/high bands.
  double real_scale_lo = 0.0;
  double real_scale_hi = 1.0;
  double integer_scale_lo = 0.0;
  double integer_scale_hi = 39.0;
};

// exact: identity. coarse: numbers snapped (reals and probabilities to the
// step, integers to their bucket label). category: the low/medium/high band of
// the coarse value, so each level's partition refines the next one. redact:
// the "REDACTED" sentinel. Text and categorical values pass through every
// level except redact.
model::Value blur_value(const model::Value& value, GranularityLevel level,
                        const BlurConfig& config = {});

}  // namespace lc::privacy
