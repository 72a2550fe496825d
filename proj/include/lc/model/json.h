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

// JSON mapping for the model types. This is the shape shared by the
// canonical store documents, the JSON-RPC wire and the evidence files.
// Decoders throw lc::Error(kParseError) on missing or mistyped fields.

#include <nlohmann/json.hpp>

#include "lc/common/error.h"
#include "lc/model/types.h"

namespace lc::model {

using nlohmann::json;

json timestamp_to_json(Timestamp t);
Timestamp timestamp_from_json(const json& j);

void to_json(json& j, const Value& v);
void from_json(const json& j, Value& v);
void to_json(json& j, const Provenance& p);
void from_json(const json& j, Provenance& p);
void to_json(json& j, const DecayPolicy& d);
void from_json(const json& j, DecayPolicy& d);
void to_json(json& j, const ContextNode& n);
void from_json(const json& j, ContextNode& n);
void to_json(json& j, const ContextEdge& e);
void from_json(const json& j, ContextEdge& e);
void to_json(json& j, const Feature& f);
void from_json(const json& j, Feature& f);
void to_json(json& j, const MisconceptionTriple& t);
void from_json(const json& j, MisconceptionTriple& t);
void to_json(json& j, const BeliefModel& b);
void from_json(const json& j, BeliefModel& b);
void to_json(json& j, const EvidenceEvent& e);
void from_json(const json& j, EvidenceEvent& e);

// Field access helpers shared by the decoders in other modules.
const json& required(const json& j, std::string_view field);
std::string required_string(const json& j, std::string_view field);
double required_number(const json& j, std::string_view field);

// Runs `fn`, converting nlohmann exceptions into lc::Error(kParseError).
template <typename Fn>
auto guarded_parse(Fn&& fn, std::string_view what) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string(what) + ": " + e.what());
  }
}

}  // namespace lc::model
