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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lc/common/time.h"
#include "lc/protocol/snapshot.h"
#include "lc/store/snapshot_store.h"

namespace lc::protocol {

struct ToolDescriptor {
  std::string name;
  std::string description;
  nlohmann::json input_schema;
};

// get_context_snapshot, push_evidence, probe_fidelity, in that order.
const std::vector<ToolDescriptor>& tool_descriptors();
nlohmann::json to_json(const ToolDescriptor& t);

struct Rejection {
  std::size_t index;
  std::string error;  // error code name
  std::string message;
};

struct PushAck {
  std::size_t accepted = 0;
  std::vector<Rejection> rejected;
  std::uint64_t version = 0;
  store::ContextDigest context_digest;
};

nlohmann::json to_json(const PushAck& a);

struct FidelityProbe {
  std::string probe_id;
  model::LearnerContext fixture = model::LearnerContext::create("probe");
  SnapshotRequest request;
  std::optional<privacy::DisclosurePolicy> policy;  // overrides the server policy
  std::vector<std::string> must_include;
  std::vector<std::string> must_exclude;
  std::map<std::string, privacy::GranularityLevel> required_levels;
  std::optional<std::string> expect_error;  // error code name, e.g. "EmptyAfterFiltering"
};

// Throws Error(kInvalidProbe) for malformed probes, invalid fixtures and
// assertions naming keys the fixture does not hold.
FidelityProbe probe_from_json(const nlohmann::json& j);

struct ProbeReport {
  std::string probe_id;
  bool passed = false;
  std::vector<std::string> failures;
  std::optional<std::string> error;  // code name raised by the snapshot call
};

nlohmann::json to_json(const ProbeReport& r);

// The warm-start server. Thread-safe: calls for one learner are serialized,
// calls for distinct learners run in parallel.
//
// Per-learner state lives next to the snapshot history:
//   <store>/<learner>/<version>.jsonld  canonical snapshots
//   <store>/<learner>/audit.jsonl       hash-chained audit log
//   <store>/<learner>/budget.json       epsilon accountant
class LcService {
 public:
  LcService(std::filesystem::path store_root, ServingConfig config,
            std::shared_ptr<const Clock> clock = std::make_shared<SystemClock>());

  const ServingConfig& config() const { return config_; }
  store::SnapshotStore& store() { return store_; }

  // Errors: LearnerNotFound, BudgetExhausted, EmptyAfterFiltering, InvalidBudget.
  ContextSnapshot get_context_snapshot(const SnapshotRequest& request);
  // Events missing learner_id inherit it from the call. Errors: LearnerNotFound.
  PushAck push_evidence(const std::string& learner_id, const std::vector<nlohmann::json>& events,
                        const std::string& actor = "lc");
  ProbeReport probe_fidelity(const FidelityProbe& probe);

  // Audit log and budget of one learner (for inspection and tests).
  std::vector<privacy::AuditRecord> audit_records(const std::string& learner_id);
  privacy::PrivacyBudget budget(const std::string& learner_id);

 private:
  struct LearnerState {
    std::mutex mu;
    std::optional<privacy::AuditChain> audit;
    std::optional<privacy::PrivacyBudget> budget;
  };

  LearnerState& state(const std::string& learner_id);
  privacy::AuditChain& audit_for(LearnerState& s, const std::string& learner_id);
  privacy::PrivacyBudget& budget_for(LearnerState& s, const std::string& learner_id);
  void persist_budget(const privacy::PrivacyBudget& b);
  model::LearnerContext load_or_not_found(const std::string& learner_id);

  store::SnapshotStore store_;
  ServingConfig config_;
  std::shared_ptr<const Clock> clock_;
  std::mutex states_mu_;
  std::map<std::string, std::unique_ptr<LearnerState>> states_;
};

}  // namespace lc::protocol
