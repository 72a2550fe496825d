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
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lc/model/context.h"
#include "lc/privacy/audit.h"
#include "lc/privacy/blur.h"

namespace lc::privacy {

struct DisclosurePolicy {
  std::map<model::Sensitivity, GranularityLevel> max_granularity = {
      {model::Sensitivity::kNone, GranularityLevel::kExact},
      {model::Sensitivity::kLow, GranularityLevel::kExact},
      {model::Sensitivity::kHigh, GranularityLevel::kCoarse},
      {model::Sensitivity::kPii, GranularityLevel::kRedact},
  };
  std::set<model::ConsentScope> allowed_purposes = {model::ConsentScope::kInstruction,
                                                    model::ConsentScope::kResearch};
  std::vector<std::string> deny_keys;  // glob patterns

  // Unlisted sensitivities are served exact, except PII which is redacted.
  GranularityLevel level_for(model::Sensitivity s) const;
};

// Throws Error(kInvalidPolicy) if PII may be served finer than coarse.
void check_policy(const DisclosurePolicy& policy);

nlohmann::json to_json(const DisclosurePolicy& policy);
DisclosurePolicy policy_from_json(const nlohmann::json& j);

// Shell-style glob (*, ?, [...]) match of a whole feature key.
bool key_matches(std::string_view pattern, std::string_view key);

enum class DenialReason {
  kUnknownKey,
  kDenyPattern,
  kNoConsent,
  kPurposeNotAllowed,
  kScopeIncompatible,
  kRetentionExpired,
};
std::string_view to_string(DenialReason r);

struct Denial {
  std::string key;
  DenialReason reason;
};

struct Authorization {
  std::vector<std::pair<std::string, GranularityLevel>> allowed;
  std::vector<Denial> denied;
};

// A feature is served only when its consent scope equals the request purpose,
// both are allowed by the policy, no deny pattern matches and its retention
// window is still open at `now`. Each denial is appended to `audit` when given.
Authorization authorize_query(const DisclosurePolicy& policy, model::ConsentScope purpose,
                              const std::vector<std::string>& keys,
                              const model::LearnerContext& ctx, Timestamp now,
                              AuditChain* audit = nullptr, std::string_view actor = "lc");

}  // namespace lc::privacy
