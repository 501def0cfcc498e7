// Copyright (c) 2026 The wprompt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WPROMPT_SCORING_H_
#define WPROMPT_SCORING_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wprompt/edit_distance.h"

namespace wprompt {

enum class ScoreTask { kAsr, kCsAsr, kSt };

const char* ScoreTaskName(ScoreTask task);
ScoreTask ParseScoreTask(std::string_view name);

// Derived from the reference alone: mandarin = CJK only, english = words only
// (including empty), code_switched = both.
enum class UtteranceClass { kMandarin, kEnglish, kCodeSwitched };

const char* UtteranceClassName(UtteranceClass cls);
UtteranceClass ClassifyReference(std::string_view normalized_reference);

struct ScoredPair {
  std::string id;
  std::string reference;
  std::string hypothesis;
};

struct UtteranceScore {
  std::string id;
  UtteranceClass cls = UtteranceClass::kEnglish;
  std::string reference;   // normalized
  std::string hypothesis;  // normalized
  // Mixed-token stats (pooled into Total MER) and the class-specific stats
  // (characters for mandarin, words for english, mixed for code-switched).
  EditStats mixed;
  EditStats category;
  // Optional context filled in by the harness.
  std::string prompt;
};

struct RecordFailure {
  std::string id;
  std::string error;
};

// Rates are percentages. A class rate is present only if the class is
// non-empty; Total MER pools mixed-token errors over every utterance.
struct EvalReport {
  ScoreTask task = ScoreTask::kAsr;
  std::optional<double> zh_cer;
  std::optional<double> en_wer;
  std::optional<double> cs_mer;
  std::optional<double> total_mer;
  std::optional<double> corpus_bleu;
  EditStats zh_stats, en_stats, cs_stats, total_stats;
  std::vector<UtteranceScore> utterances;
  std::vector<RecordFailure> failures;
  // Free-form provenance (config hash, normalization version, ...).
  nlohmann::json metadata = nlohmann::json::object();

  nlohmann::json ToJson() const;
  // Columns: Zh CER, En WER, CS MER, Total MER (and BLEU when present).
  std::string ToTable() const;
};

inline constexpr int kReportFormatVersion = 1;

// Throws ConfigError for an empty corpus. BLEU (st task only) uses character
// tokens when any reference contains CJK, words otherwise.
EvalReport ScoreCorpus(std::span<const ScoredPair> pairs, ScoreTask task);

}  // namespace wprompt

#endif  // WPROMPT_SCORING_H_
