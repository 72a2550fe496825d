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

#include "lc/privacy/audit.h"

#include <array>
#include <fstream>

#include "lc/common/digest.h"
#include "lc/common/error.h"
#include "lc/model/json.h"

namespace lc::privacy {

namespace {

constexpr std::array<std::pair<std::string_view, AuditAction>, 6> kActionNames = {{
    {"snapshot_served", AuditAction::kSnapshotServed},
    {"evidence_pushed", AuditAction::kEvidencePushed},
    {"feature_pruned", AuditAction::kFeaturePruned},
    {"budget_charged", AuditAction::kBudgetCharged},
    {"query_denied", AuditAction::kQueryDenied},
    {"merge_conflict", AuditAction::kMergeConflict},
}};

Sha256 from_hex(std::string_view hex) {
  Sha256 out{};
  if (hex.size() != 64) throw Error(ErrorCode::kParseError, "digest must be 64 hex chars");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw Error(ErrorCode::kParseError, "digest must be lowercase hex");
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

}  // namespace

std::string_view to_string(AuditAction a) {
  for (const auto& [name, v] : kActionNames) {
    if (v == a) return name;
  }
  return "?";
}

AuditAction parse_audit_action(std::string_view s) {
  for (const auto& [name, v] : kActionNames) {
    if (name == s) return v;
  }
  throw Error(ErrorCode::kParseError, "unknown audit action '" + std::string(s) + "'");
}

std::string record_body(const AuditRecord& r) {
  const nlohmann::json body{{"at", format_rfc3339(r.at)},
                            {"actor", r.actor},
                            {"action", to_string(r.action)},
                            {"detail", r.detail}};
  return body.dump();
}

std::string chain_hash(std::string_view previous_hex, const AuditRecord& r) {
  const auto prev = from_hex(previous_hex);
  std::string buf(reinterpret_cast<const char*>(prev.data()), prev.size());
  buf += record_body(r);
  return sha256_hex(buf);
}

ChainVerification verify_chain(const std::vector<AuditRecord>& records) {
  std::string prev(kGenesisHash);
  for (std::size_t i = 0; i < records.size(); ++i) {
    bool ok = false;
    try {
      ok = records[i].chain_hash == chain_hash(prev, records[i]);
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) return {false, i};
    prev = records[i].chain_hash;
  }
  return {true, std::nullopt};
}

nlohmann::json to_json(const AuditRecord& r) {
  return {{"at", format_rfc3339(r.at)},
          {"actor", r.actor},
          {"action", to_string(r.action)},
          {"detail", r.detail},
          {"chain_hash", r.chain_hash}};
}

AuditRecord audit_record_from_json(const nlohmann::json& j) {
  AuditRecord r;
  r.at = model::timestamp_from_json(model::required(j, "at"));
  r.actor = model::required_string(j, "actor");
  r.action = parse_audit_action(model::required_string(j, "action"));
  r.detail = model::required(j, "detail");
  r.chain_hash = model::required_string(j, "chain_hash");
  return r;
}

AuditChain AuditChain::open(const std::filesystem::path& path) {
  AuditChain chain;
  if (std::ifstream in(path); in) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      try {
        chain.records_.push_back(audit_record_from_json(nlohmann::json::parse(line)));
      } catch (const std::exception& e) {
        throw Error(ErrorCode::kStorageFailure,
                    path.string() + ":" + std::to_string(n) + ": " + e.what());
      }
    }
    if (const auto v = chain.verify(); !v.ok) {
      throw Error(ErrorCode::kStorageFailure, "audit log " + path.string() +
                                                  " fails verification at record " +
                                                  std::to_string(*v.first_bad));
    }
  }
  chain.file_ = path;
  return chain;
}

std::string AuditChain::tail_hash() const {
  return records_.empty() ? std::string(kGenesisHash) : records_.back().chain_hash;
}

const AuditRecord& AuditChain::append(AuditRecord record) {
  record.chain_hash = chain_hash(tail_hash(), record);
  if (file_) {
    std::ofstream out(*file_, std::ios::app | std::ios::binary);
    out << to_json(record).dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kStorageFailure, "cannot append to " + file_->string());
  }
  records_.push_back(std::move(record));
  return records_.back();
}

}  // namespace lc::privacy
