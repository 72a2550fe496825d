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

#include "lc/sim/agents.h"

#include "lc/common/error.h"
#include "lc/common/random.h"
#include "lc/model/json.h"

namespace lc::sim {

namespace {

constexpr std::string_view kStatementHead = "I worked it out as \"";
constexpr std::string_view kStatementBelief = "\", because I think \"";
constexpr std::string_view kStatementTrigger = "\" whenever \"";
constexpr std::string_view kStatementTail = "\".";
constexpr std::string_view kFiller = "Let me try the next part.";
constexpr std::string_view kStrategyHead = "[strategy: ";

const std::map<std::string, std::string_view>& tutor_lines() {
  static const std::map<std::string, std::string_view> kLines = {
      {std::string(kProbeStrategy), "Can you walk me through how you approached this?"},
      {"foster growth mindset", "Mistakes are how we learn; your effort here is building skill."},
      {"goal setting and monitoring", "Let's set one small goal and check it off together."},
      {"simplified language scaffolding", "Short steps. First this. Then that."},
      {"address misconception", "Let's test that idea against a counterexample."},
      {"guided practice", "Here is a similar problem; try the first step."},
  };
  return kLines;
}

}  // namespace

std::string_view to_string(Speaker s) { return s == Speaker::kStudent ? "student" : "tutor"; }

std::string_view to_string(Condition c) {
  return c == Condition::kContextAware ? "context_aware" : "context_blind";
}

Condition parse_condition(std::string_view s) {
  if (s == "context_aware" || s == "aware") return Condition::kContextAware;
  if (s == "context_blind" || s == "blind") return Condition::kContextBlind;
  throw Error(ErrorCode::kParseError, "unknown condition '" + std::string(s) + "'");
}

std::string Transcript::text() const {
  std::string out;
  for (const auto& t : turns) {
    if (!out.empty()) out += '\n';
    out += t.text;
  }
  return out;
}

nlohmann::json to_json(const Transcript& t) {
  nlohmann::json turns = nlohmann::json::array();
  for (const auto& turn : t.turns) {
    turns.push_back({{"index", turn.index}, {"speaker", to_string(turn.speaker)}, {"text", turn.text}});
  }
  return {{"seed", t.seed}, {"condition", to_string(t.condition)}, {"turns", turns}};
}

Onsets signal_onsets(std::uint64_t seed, const SignalConfig& config) {
  Rng rng(derive_seed(seed, {0x6f6e736574ULL}));
  const auto c = static_cast<int>(
      rng.uniform_int(config.conscientiousness_onset_min, config.conscientiousness_onset_max));
  return {c, c + config.language_onset_gap};
}

std::string misconception_statement(const model::MisconceptionTriple& t) {
  return std::string(kStatementHead) + t.erroneous_example + std::string(kStatementBelief) +
         t.underlying_belief + std::string(kStatementTrigger) + t.triggering_feature +
         std::string(kStatementTail);
}

std::string ReferenceLearner::respond(const model::BeliefModel& beliefs,
                                      const std::vector<Turn>& history, std::uint64_t seed) {
  const int index = static_cast<int>(history.size()) + 1;
  const auto ordinal = static_cast<std::size_t>(index / 2);
  const auto onsets = signal_onsets(seed, config_);

  std::string out = ordinal >= 1 && ordinal <= beliefs.misconceptions.size()
                        ? misconception_statement(beliefs.misconceptions[ordinal - 1])
                        : std::string(kFiller);
  // A diagnostic probe asks for everything at once.
  const bool probed = !history.empty() && strategy_of(history.back().text) == kProbeStrategy;
  auto mark = [&](const std::string& attribute, int onset) {
    const auto it = beliefs.profile.find(attribute);
    if (it == beliefs.profile.end() || (index < onset && !probed)) return;
    out += ' ';
    out += config_.markers.at(attribute).at(it->second);
  };
  mark("anxiety", 0);
  mark("conscientiousness", onsets.conscientiousness);
  mark("language_proficiency", onsets.language_proficiency);
  return out;
}

Recovery ReferenceRecovery::recover(const Transcript& transcript) {
  Recovery r;
  r.beliefs.provenance = {"recovery", model::ConsentScope::kInstruction, std::nullopt, {}};
  for (const auto& turn : transcript.turns) {
    if (turn.speaker != Speaker::kStudent) continue;
    const std::string_view text = turn.text;

    for (std::size_t pos = text.find(kStatementHead); pos != text.npos;
         pos = text.find(kStatementHead, pos + 1)) {
      const auto ex = pos + kStatementHead.size();
      const auto b = text.find(kStatementBelief, ex);
      if (b == text.npos) break;
      const auto tr = text.find(kStatementTrigger, b + kStatementBelief.size());
      if (tr == text.npos) break;
      const auto end = text.find(kStatementTail, tr + kStatementTrigger.size());
      if (end == text.npos) break;
      model::MisconceptionTriple t{
          std::string(text.substr(b + kStatementBelief.size(), tr - b - kStatementBelief.size())),
          std::string(text.substr(ex, b - ex)),
          std::string(text.substr(tr + kStatementTrigger.size(),
                                  end - tr - kStatementTrigger.size()))};
      const auto claim = "misconception[" + std::to_string(r.beliefs.misconceptions.size()) + "]";
      r.evidence[claim] = std::string(text.substr(pos, end + kStatementTail.size() - pos));
      r.beliefs.misconceptions.push_back(std::move(t));
    }

    for (const auto& [attribute, levels] : config_.markers) {
      if (r.beliefs.profile.contains(attribute)) continue;
      for (const auto& [level, marker] : levels) {
        if (text.find(marker) != text.npos) {
          r.beliefs.profile.emplace(attribute, level);
          r.evidence[attribute] = marker;
          break;
        }
      }
    }
  }
  return r;
}

std::string NeedTable::strategy_for(const model::BeliefModel& beliefs) const {
  for (const auto& rule : rules) {
    if (rule.attribute == "misconception") {
      if (!beliefs.misconceptions.empty()) return rule.strategy;
      continue;
    }
    const auto it = beliefs.profile.find(rule.attribute);
    if (it != beliefs.profile.end() && (!rule.level || *rule.level == it->second)) {
      return rule.strategy;
    }
  }
  return fallback;
}

std::string tutor_utterance(std::string_view strategy) {
  std::string out = std::string(kStrategyHead) + std::string(strategy) + "]";
  const auto& lines = tutor_lines();
  if (const auto it = lines.find(std::string(strategy)); it != lines.end()) {
    out += ' ';
    out += it->second;
  }
  return out;
}

std::optional<std::string> strategy_of(std::string_view tutor_text) {
  if (!tutor_text.starts_with(kStrategyHead)) return std::nullopt;
  const auto end = tutor_text.find(']');
  if (end == tutor_text.npos) return std::nullopt;
  return std::string(tutor_text.substr(kStrategyHead.size(), end - kStrategyHead.size()));
}

std::string ReferenceTutor::respond(const std::optional<protocol::ContextSnapshot>& snapshot,
                                    const std::vector<Turn>& history, std::uint64_t) {
  if (snapshot && snapshot->beliefs) return tutor_utterance(table_.strategy_for(*snapshot->beliefs));
  const int ordinal = static_cast<int>(history.size()) / 2 + 1;
  if (probe_turns_ == 0) return tutor_utterance(table_.fallback);
  if (ordinal <= probe_turns_) return tutor_utterance(kProbeStrategy);
  Transcript so_far{history, 0, Condition::kContextBlind};
  const auto seen = ReferenceRecovery(signals_).recover(so_far);
  return tutor_utterance(table_.strategy_for(seen.beliefs));
}

}  // namespace lc::sim
