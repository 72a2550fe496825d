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

#include "lc/privacy/blur.h"

#include <cmath>

#include "lc/common/error.h"

namespace lc::privacy {

namespace {

using model::Categorical;
using model::Integer;
using model::Probability;
using model::Real;
using model::Text;
using model::Value;

double snap(double x, double step) {
  // Divide by the reciprocal when it is integral: 8.0 / 10 is exactly the
  // double nearest 0.8, 8 * 0.1 is not.
  const double per_unit = std::round(1.0 / step);
  if (std::abs(per_unit * step - 1.0) < 1e-12) return std::round(x * per_unit) / per_unit;
  return std::round(x / step) * step;
}

// Bands by thirds of [lo, hi]; compared without dividing so that values on a
// boundary land in the upper band deterministically.
std::string band(double v, double lo, double hi) {
  const double span = hi - lo;
  const double off = v - lo;
  if (3.0 * off < span) return "low";
  if (3.0 * off < 2.0 * span) return "medium";
  return "high";
}

const IntegerBucket* bucket_for(std::int64_t v, const BlurConfig& config) {
  for (const auto& b : config.integer_buckets) {
    if (v >= b.lo && (!b.hi || v <= *b.hi)) return &b;
  }
  return nullptr;
}

Value coarse(const Value& value, const BlurConfig& config) {
  if (const auto* p = std::get_if<Probability>(&value)) {
    return Probability{snap(p->value, config.real_step)};
  }
  if (const auto* r = std::get_if<Real>(&value)) return Real{snap(r->value, config.real_step)};
  if (const auto* i = std::get_if<Integer>(&value)) {
    const auto* b = bucket_for(i->value, config);
    return Categorical{b ? b->label : std::string("[out-of-range]")};
  }
  return value;
}

Value category(const Value& value, const BlurConfig& config) {
  const Value c = coarse(value, config);
  if (const auto* p = std::get_if<Probability>(&c)) return Categorical{band(p->value, 0.0, 1.0)};
  if (const auto* r = std::get_if<Real>(&c)) {
    return Categorical{band(r->value, config.real_scale_lo, config.real_scale_hi)};
  }
  if (const auto* i = std::get_if<Integer>(&value)) {
    // Band of the bucket's lower bound keeps whole buckets together.
    const auto* b = bucket_for(i->value, config);
    if (!b) return Categorical{"[out-of-range]"};
    return Categorical{
        band(static_cast<double>(b->lo), config.integer_scale_lo, config.integer_scale_hi)};
  }
  return c;
}

}  // namespace

std::string_view to_string(GranularityLevel g) {
  switch (g) {
    case GranularityLevel::kExact: return "exact";
    case GranularityLevel::kCoarse: return "coarse";
    case GranularityLevel::kCategory: return "category";
    case GranularityLevel::kRedact: return "redact";
  }
  return "?";
}

GranularityLevel parse_granularity(std::string_view s) {
  if (s == "exact") return GranularityLevel::kExact;
  if (s == "coarse") return GranularityLevel::kCoarse;
  if (s == "category") return GranularityLevel::kCategory;
  if (s == "redact") return GranularityLevel::kRedact;
  throw Error(ErrorCode::kParseError, "unknown granularity level '" + std::string(s) + "'");
}

Value blur_value(const Value& value, GranularityLevel level, const BlurConfig& config) {
  switch (level) {
    case GranularityLevel::kExact: return value;
    case GranularityLevel::kCoarse: return coarse(value, config);
    case GranularityLevel::kCategory: return category(value, config);
    case GranularityLevel::kRedact: return Text{std::string(kRedacted)};
  }
  return Text{std::string(kRedacted)};
}

}  // namespace lc::privacy
