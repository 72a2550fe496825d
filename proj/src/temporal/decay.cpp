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

#include "lc/temporal/decay.h"

#include <algorithm>
#include <cmath>

#include "lc/common/error.h"

namespace lc::temporal {

double decay_weight(Timestamp observed_at, Timestamp now, const model::DecayPolicy& policy) {
  if (now < observed_at) {
    throw Error(ErrorCode::kNegativeElapsed,
                "now " + format_rfc3339(now) + " precedes " + format_rfc3339(observed_at));
  }
  return std::exp(-policy.lambda * elapsed_days(observed_at, now));
}

double effective_weight(const model::Feature& f, Timestamp now) {
  return decay_weight(std::min(f.observed_at, now), now, f.decay) * f.confidence;
}

std::vector<std::pair<Timestamp, double>> smooth_series(
    const std::vector<std::pair<Timestamp, double>>& values, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kAlphaOutOfRange, "alpha must lie in (0, 1]");
  }
  std::vector<std::pair<Timestamp, double>> out;
  out.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto& [t, v] = values[k];
    if (k > 0 && !(values[k - 1].first < t)) {
      throw Error(ErrorCode::kNonMonotoneTimestamps,
                  "timestamp #" + std::to_string(k) + " does not increase");
    }
    out.emplace_back(t, k == 0 ? v : alpha * v + (1.0 - alpha) * out.back().second);
  }
  return out;
}

std::vector<std::string> prune_forgotten(model::LearnerContext& ctx, Timestamp now,
                                         privacy::AuditChain* audit, std::string_view actor,
                                         const model::ModelLimits& limits) {
  std::vector<std::string> pruned;
  std::vector<model::Feature> updates;
  for (const auto& f : ctx.all_features()) {
    const bool trips = effective_weight(f, now) < f.decay.floor;
    if (f.kind == model::FeatureKind::kState) {
      if (trips) pruned.push_back(f.key);
      continue;
    }
    if (!trips) {
      if (f.demoted_at) {
        auto g = f;
        g.demoted_at.reset();
        updates.push_back(std::move(g));
      }
    } else if (!f.demoted_at) {
      auto g = f;
      g.confidence = f.confidence / 2.0;
      g.demoted_at = now;
      g.updated_at = std::max(g.updated_at, now);
      updates.push_back(std::move(g));
    } else if (*f.demoted_at < now) {
      pruned.push_back(f.key);
    }
    // Demoted at this very instant: a repeated pass is not a second strike.
  }

  for (auto& g : updates) ctx.set_feature(std::move(g), limits);
  for (const auto& key : pruned) {
    ctx.remove_feature(key, now);
    if (audit) {
      audit->append({now,
                     std::string(actor),
                     privacy::AuditAction::kFeaturePruned,
                     {{"learner_id", ctx.learner_id()}, {"key", key}},
                     {}});
    }
  }
  return pruned;
}

}  // namespace lc::temporal
