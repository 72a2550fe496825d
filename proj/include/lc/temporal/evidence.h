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

#include <istream>
#include <string>
#include <vector>

#include "lc/model/context.h"
#include "lc/temporal/bkt.h"
#include "lc/temporal/decay.h"

namespace lc::temporal {

struct IngestOptions {
  BktParams bkt;
  TemporalConfig temporal;
  Timestamp now{};  // ingestion clock; events after it are rejected
};

// Feature key that holds mastery for a skill or content node.
std::string mastery_key(std::string_view node_id);

// Applies one evidence event and bumps the version once.
//
// answer         target is a feature key or a Skill/ContentItem node id; the
//                mastery probability (created at p_init if absent) goes
//                through one BKT step. Payload: correct (bool), item_id.
// survey_item    target is a feature key; the response is min-max normalized
//                with scale_min (default 0) and scale_max and stored as a
//                probability. Payload: instrument, response, scale_max[, scale_min].
// dialogue_turn,
// platform_event target is a node id or feature key; the event is appended to
//                the context's evidence log.
//
// Errors: LearnerMismatch, InvalidEvent (malformed payload or event from the
// future), UnresolvableTarget, StaleEvent (event after the target's retention
// window closed), InvalidParams.
void ingest_evidence(model::LearnerContext& ctx, const model::EvidenceEvent& event,
                     const IngestOptions& options);

// One EvidenceEvent per non-empty line. Throws Error(kParseError) naming the line.
std::vector<model::EvidenceEvent> read_evidence_jsonl(std::istream& in);

}  // namespace lc::temporal
