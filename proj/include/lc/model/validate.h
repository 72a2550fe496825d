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

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lc/model/context.h"

namespace lc::model {

enum class Check { kSchema, kCompleteness, kTimestamp, kPiiSeparation };
std::string_view to_string(Check c);

struct Violation {
  Check check;
  std::string subject;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  // Empty non-Who dimensions land here; they never make a context invalid.
  std::vector<Violation> warnings;

  bool valid() const { return violations.empty(); }
  std::size_t count(Check c) const;
};

struct ValidateOptions {
  std::set<Dimension> waived;
  ModelLimits limits;
};

// Structural checks only: the invariants of every type in the model.
std::vector<Violation> validate_schema(const LearnerContext& ctx, const ModelLimits& limits = {});

// Schema conformance, completeness, timestamp integrity (nothing after `now`)
// and PII separation.
ValidationReport validate(const LearnerContext& ctx, Timestamp now,
                          const ValidateOptions& options = {});

nlohmann::json to_json(const ValidationReport& r);

}  // namespace lc::model
