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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lc/model/types.h"
#include "lc/protocol/snapshot.h"

namespace lc::sim {

enum class Speaker { kStudent, kTutor };
enum class Condition { kContextAware, kContextBlind };

std::string_view to_string(Speaker s);
std::string_view to_string(Condition c);
Condition parse_condition(std::string_view s);

struct Turn {
  Speaker speaker;
  std::string text;
  int index;  // 1-based; the tutor speaks on odd turns

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Transcript {
  std::vector<Turn> turns;
  std::uint64_t seed = 0;
  Condition condition = Condition::kContextBlind;

  // Turn texts joined by newlines; evidence spans must be substrings of it.
  std::string text() const;
};

nlohmann::json to_json(const Transcript& t);

// Recovered beliefs plus, for every claim, the transcript span supporting it.
// Claims are "misconception[i]" and the profile attribute names.
struct Recovery {
  model::BeliefModel beliefs;
  std::map<std::string, std::string> evidence;
};

class LearnerAgent {
 public:
  virtual ~LearnerAgent() = default;
  virtual std::string respond(const model::BeliefModel& beliefs, const std::vector<Turn>& history,
                              std::uint64_t seed) = 0;
};

class TutorAgent {
 public:
  virtual ~TutorAgent() = default;
  virtual std::string respond(const std::optional<protocol::ContextSnapshot>& snapshot,
                              const std::vector<Turn>& history, std::uint64_t seed) = 0;
};

class RecoveryAgent {
 public:
  virtual ~RecoveryAgent() = default;
  virtual Recovery recover(const Transcript& transcript) = 0;
};

// Lexical signals of the reference learner. Each profile level has a fixed
// marker sentence. Anxiety is marked on every student turn; conscientiousness
// and language proficiency from a seed-dependent onset turn on. Misconception
// i is stated on student turn i + 1 using the statement template. A reply to
// a diagnostic probe carries every profile marker regardless of onset.
struct SignalConfig {
  int conscientiousness_onset_min = 3;
  int conscientiousness_onset_max = 7;
  // Language onset = conscientiousness onset + this gap, so it is uniform over
  // [5, 9] and never precedes the conscientiousness onset.
  int language_onset_gap = 2;

  std::map<std::string, std::map<model::Level, std::string>> markers = {
      {"anxiety",
       {{model::Level::kHigh, "Um, sorry, I'm really not sure about any of this."},
        {model::Level::kMedium, "I think this is right, but I could be wrong."},
        {model::Level::kLow, "I'm confident about this one."}}},
      {"conscientiousness",
       {{model::Level::kLow, "I gave up on the remaining steps."},
        {model::Level::kMedium, "I did most of the steps."},
        {model::Level::kHigh, "I double-checked every step."}}},
      {"language_proficiency",
       {{model::Level::kLow, "Words hard. Me try."},
        {model::Level::kMedium, "I can explain it in simple words."},
        {model::Level::kHigh, "Let me articulate my reasoning with some precision."}}},
  };
};

struct Onsets {
  int conscientiousness;
  int language_proficiency;
};

Onsets signal_onsets(std::uint64_t seed, const SignalConfig& config = {});

// "I worked it out as "<example>", because I think "<belief>" whenever "<trigger>"."
std::string misconception_statement(const model::MisconceptionTriple& t);

class ReferenceLearner final : public LearnerAgent {
 public:
  explicit ReferenceLearner(SignalConfig config = {}) : config_(std::move(config)) {}
  std::string respond(const model::BeliefModel& beliefs, const std::vector<Turn>& history,
                      std::uint64_t seed) override;

 private:
  SignalConfig config_;
};

class ReferenceRecovery final : public RecoveryAgent {
 public:
  explicit ReferenceRecovery(SignalConfig config = {}) : config_(std::move(config)) {}
  Recovery recover(const Transcript& transcript) override;

 private:
  SignalConfig config_;
};

// Ordered need -> strategy table; the first matching rule names the
// learner's dominant need.
struct NeedRule {
  std::string attribute;  // profile attribute, or "misconception"
  std::optional<model::Level> level;
  std::string strategy;
};

struct NeedTable {
  std::vector<NeedRule> rules = {
      {"anxiety", model::Level::kHigh, "foster growth mindset"},
      {"conscientiousness", model::Level::kLow, "goal setting and monitoring"},
      {"language_proficiency", model::Level::kLow, "simplified language scaffolding"},
      {"misconception", std::nullopt, "address misconception"},
  };
  std::string fallback = "guided practice";

  std::string strategy_for(const model::BeliefModel& beliefs) const;
};

inline constexpr std::string_view kProbeStrategy = "diagnostic probing";

// Tutor utterances start with "[strategy: <name>]".
std::string tutor_utterance(std::string_view strategy);
std::optional<std::string> strategy_of(std::string_view tutor_text);

// Reads the dominant need off the snapshot's beliefs. Without disclosed
// beliefs it behaves like the blind tutor.
class ReferenceTutor final : public TutorAgent {
 public:
  // `probe_turns`: tutor turns spent probing before adapting to what the
  // learner has revealed; 0 disables probing (the tutor then uses the table's
  // fallback until a snapshot is supplied).
  explicit ReferenceTutor(int probe_turns = 3, NeedTable table = {}, SignalConfig signals = {})
      : probe_turns_(probe_turns), table_(std::move(table)), signals_(std::move(signals)) {}

  std::string respond(const std::optional<protocol::ContextSnapshot>& snapshot,
                      const std::vector<Turn>& history, std::uint64_t seed) override;

 private:
  int probe_turns_;
  NeedTable table_;
  SignalConfig signals_;
};

}  // namespace lc::sim
