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

#include "lc/privacy/policy.h"

#include <fnmatch.h>

#include <algorithm>

#include "lc/common/error.h"
#include "lc/model/json.h"

namespace lc::privacy {

using model::ConsentScope;
using model::Sensitivity;

GranularityLevel DisclosurePolicy::level_for(Sensitivity s) const {
  if (const auto it = max_granularity.find(s); it != max_granularity.end()) return it->second;
  return s == Sensitivity::kPii ? GranularityLevel::kRedact : GranularityLevel::kExact;
}

void check_policy(const DisclosurePolicy& policy) {
  if (policy.level_for(Sensitivity::kPii) < GranularityLevel::kCoarse) {
    throw Error(ErrorCode::kInvalidPolicy, "PII must map to coarse or stricter");
  }
  if (policy.allowed_purposes.contains(ConsentScope::kNone)) {
    throw Error(ErrorCode::kInvalidPolicy, "'none' is not a servable purpose");
  }
}

nlohmann::json to_json(const DisclosurePolicy& policy) {
  nlohmann::json levels = nlohmann::json::object();
  for (const auto& [s, g] : policy.max_granularity) levels[std::string(to_string(s))] = to_string(g);
  nlohmann::json purposes = nlohmann::json::array();
  for (const auto p : policy.allowed_purposes) purposes.push_back(to_string(p));
  return {{"max_granularity", levels}, {"allowed_purposes", purposes}, {"deny_keys", policy.deny_keys}};
}

DisclosurePolicy policy_from_json(const nlohmann::json& j) {
  return model::guarded_parse(
      [&] {
        DisclosurePolicy p;
        if (const auto it = j.find("max_granularity"); it != j.end()) {
          p.max_granularity.clear();
          for (auto e = it->begin(); e != it->end(); ++e) {
            p.max_granularity[model::parse_sensitivity(e.key())] =
                parse_granularity(e.value().get<std::string>());
          }
        }
        if (const auto it = j.find("allowed_purposes"); it != j.end()) {
          p.allowed_purposes.clear();
          for (const auto& s : *it) p.allowed_purposes.insert(model::parse_consent_scope(s.get<std::string>()));
        }
        if (const auto it = j.find("deny_keys"); it != j.end()) {
          p.deny_keys = it->get<std::vector<std::string>>();
        }
        check_policy(p);
        return p;
      },
      "policy");
}

bool key_matches(std::string_view pattern, std::string_view key) {
  return fnmatch(std::string(pattern).c_str(), std::string(key).c_str(), 0) == 0;
}

std::string_view to_string(DenialReason r) {
  switch (r) {
    case DenialReason::kUnknownKey: return "unknown_key";
    case DenialReason::kDenyPattern: return "deny_pattern";
    case DenialReason::kNoConsent: return "no_consent";
    case DenialReason::kPurposeNotAllowed: return "purpose_not_allowed";
    case DenialReason::kScopeIncompatible: return "scope_incompatible";
    case DenialReason::kRetentionExpired: return "retention_expired";
  }
  return "?";
}

Authorization authorize_query(const DisclosurePolicy& policy, ConsentScope purpose,
                              const std::vector<std::string>& keys,
                              const model::LearnerContext& ctx, Timestamp now, AuditChain* audit,
                              std::string_view actor) {
  Authorization out;
  for (const auto& key : keys) {
    const auto* f = ctx.find_feature(key);
    std::optional<DenialReason> reason;
    if (!f) {
      reason = DenialReason::kUnknownKey;
    } else if (std::any_of(policy.deny_keys.begin(), policy.deny_keys.end(),
                           [&](const std::string& p) { return key_matches(p, key); })) {
      reason = DenialReason::kDenyPattern;
    } else if (f->provenance.consent_scope == ConsentScope::kNone) {
      reason = DenialReason::kNoConsent;
    } else if (!policy.allowed_purposes.contains(purpose) ||
               !policy.allowed_purposes.contains(f->provenance.consent_scope)) {
      reason = DenialReason::kPurposeNotAllowed;
    } else if (f->provenance.consent_scope != purpose) {
      reason = DenialReason::kScopeIncompatible;
    } else if (f->provenance.retention_until && now > *f->provenance.retention_until) {
      reason = DenialReason::kRetentionExpired;
    }

    if (reason) {
      out.denied.push_back({key, *reason});
      if (audit) {
        audit->append({now,
                       std::string(actor),
                       AuditAction::kQueryDenied,
                       {{"learner_id", ctx.learner_id()},
                        {"key", key},
                        {"purpose", to_string(purpose)},
                        {"reason", to_string(*reason)}},
                       {}});
      }
    } else {
      out.allowed.emplace_back(key, policy.level_for(f->sensitivity));
    }
  }
  return out;
}

}  // namespace lc::privacy
