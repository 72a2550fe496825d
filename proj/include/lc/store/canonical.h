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

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lc/model/context.h"

namespace lc::store {

inline constexpr std::string_view kMediaType = "application/ld+json";
inline constexpr std::string_view kProfile = "lc/v1";
inline constexpr std::string_view kVocabulary = "urn:lc:v1#";

// Deterministic UTF-8 JSON-LD bytes: object keys sorted, no insignificant
// whitespace, RFC 3339 UTC timestamps, shortest round-trip reals. Nodes are
// ordered by id, edges by (src, relation, dst), features keyed by feature key.
struct CanonicalDocument {
  std::string bytes;
  std::string media_type{kMediaType};
  std::string profile{kProfile};
};

struct ContextDigest {
  std::string algorithm = "sha-256";
  std::string hex;  // 64 lowercase hex chars

  friend bool operator==(const ContextDigest&, const ContextDigest&) = default;
};

nlohmann::json context_to_json(const model::LearnerContext& ctx);
// Throws Error(kInvalidContext) if the document is malformed or the context
// it describes fails schema conformance.
model::LearnerContext context_from_json(const nlohmann::json& j);

// Throws Error(kInvalidContext) if ctx has schema-conformance violations.
CanonicalDocument canonical_serialize(const model::LearnerContext& ctx);
model::LearnerContext deserialize(std::string_view bytes);

ContextDigest content_hash(const model::LearnerContext& ctx);

}  // namespace lc::store
