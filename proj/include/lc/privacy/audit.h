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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lc/common/time.h"

namespace lc::privacy {

enum class AuditAction {
  kSnapshotServed,
  kEvidencePushed,
  kFeaturePruned,
  kBudgetCharged,
  kQueryDenied,
  kMergeConflict,
};

std::string_view to_string(AuditAction a);
AuditAction parse_audit_action(std::string_view s);

struct AuditRecord {
  Timestamp at{};
  std::string actor;
  AuditAction action = AuditAction::kSnapshotServed;
  nlohmann::json detail = nlohmann::json::object();
  std::string chain_hash;  // lowercase hex SHA-256

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

// 32 zero bytes in hex: the predecessor of the first record.
inline constexpr std::string_view kGenesisHash =
    "0000000000000000000000000000000000000000000000000000000000000000";

// Bytes hashed for a record: its JSON without chain_hash, keys sorted.
std::string record_body(const AuditRecord& r);
// SHA-256(previous digest bytes || record body), as hex.
std::string chain_hash(std::string_view previous_hex, const AuditRecord& r);

struct ChainVerification {
  bool ok = true;
  std::optional<std::size_t> first_bad;  // index of the first record failing
};

ChainVerification verify_chain(const std::vector<AuditRecord>& records);

nlohmann::json to_json(const AuditRecord& r);
AuditRecord audit_record_from_json(const nlohmann::json& j);

// Append-only hash chain, optionally mirrored to a JSON Lines file.
// Single writer; callers serialize appends for one learner.
class AuditChain {
 public:
  AuditChain() = default;

  // Loads an existing log (if any) and mirrors further appends to it.
  // Throws Error(kStorageFailure) if the file exists but fails verification.
  static AuditChain open(const std::filesystem::path& path);

  // Fills in chain_hash from the current tail and appends.
  const AuditRecord& append(AuditRecord record);

  const std::vector<AuditRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  std::string tail_hash() const;
  ChainVerification verify() const { return verify_chain(records_); }

 private:
  std::vector<AuditRecord> records_;
  std::optional<std::filesystem::path> file_;
};

}  // namespace lc::privacy
