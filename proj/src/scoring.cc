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

#include "wprompt/scoring.h"

#include <cstdio>
#include <sstream>

#include "wprompt/bleu.h"
#include "wprompt/errors.h"
#include "wprompt/text_normalizer.h"

namespace wprompt {

using nlohmann::json;

const char* ScoreTaskName(ScoreTask task) {
  switch (task) {
    case ScoreTask::kAsr:
      return "asr";
    case ScoreTask::kCsAsr:
      return "cs_asr";
    case ScoreTask::kSt:
      return "st";
  }
  return "?";
}

ScoreTask ParseScoreTask(std::string_view name) {
  if (name == "asr") return ScoreTask::kAsr;
  if (name == "cs_asr") return ScoreTask::kCsAsr;
  if (name == "st") return ScoreTask::kSt;
  throw ConfigError("unknown task: " + std::string(name));
}

const char* UtteranceClassName(UtteranceClass cls) {
  switch (cls) {
    case UtteranceClass::kMandarin:
      return "mandarin";
    case UtteranceClass::kEnglish:
      return "english";
    case UtteranceClass::kCodeSwitched:
      return "code_switched";
  }
  return "?";
}

UtteranceClass ClassifyReference(std::string_view normalized_reference) {
  bool cjk = false;
  bool words = false;
  for (const auto& t : MixedTokenize(normalized_reference)) {
    (t.kind == MixedToken::Kind::kCjkChar ? cjk : words) = true;
  }
  if (cjk && words) return UtteranceClass::kCodeSwitched;
  if (cjk) return UtteranceClass::kMandarin;
  return UtteranceClass::kEnglish;
}

EvalReport ScoreCorpus(std::span<const ScoredPair> pairs, ScoreTask task) {
  if (pairs.empty()) throw ConfigError("cannot score an empty corpus");
  EvalReport report;
  report.task = task;
  bool any_zh = false, any_en = false, any_cs = false;
  bool cjk_target = false;
  std::vector<std::pair<std::string, std::string>> bleu_pairs;

  for (const auto& pair : pairs) {
    UtteranceScore u;
    u.id = pair.id;
    u.reference = Normalize(pair.reference, NormalizationProfile::kMixed);
    u.hypothesis = Normalize(pair.hypothesis, NormalizationProfile::kMixed);
    u.cls = ClassifyReference(u.reference);
    const auto ref_mixed = MixedSurfaces(u.reference);
    const auto hyp_mixed = MixedSurfaces(u.hypothesis);
    u.mixed = ComputeEditStats(ref_mixed, hyp_mixed);
    switch (u.cls) {
      case UtteranceClass::kMandarin:
        u.category = ComputeEditStats(CharTokenize(u.reference),
                                      CharTokenize(u.hypothesis));
        report.zh_stats += u.category;
        any_zh = true;
        break;
      case UtteranceClass::kEnglish:
        u.category = ComputeEditStats(WordTokenize(u.reference),
                                      WordTokenize(u.hypothesis));
        report.en_stats += u.category;
        any_en = true;
        break;
      case UtteranceClass::kCodeSwitched:
        u.category = u.mixed;
        report.cs_stats += u.category;
        any_cs = true;
        break;
    }
    report.total_stats += u.mixed;
    if (task == ScoreTask::kSt) {
      cjk_target = cjk_target || ContainsCjk(pair.reference);
      bleu_pairs.emplace_back(pair.reference, pair.hypothesis);
    }
    report.utterances.push_back(std::move(u));
  }

  if (task == ScoreTask::kSt) {
    report.corpus_bleu = CorpusBleu(
        bleu_pairs, cjk_target ? BleuTokenization::kChar : BleuTokenization::kWord);
  } else {
    if (any_zh) report.zh_cer = 100.0 * report.zh_stats.rate();
    if (any_en) report.en_wer = 100.0 * report.en_stats.rate();
    if (any_cs) report.cs_mer = 100.0 * report.cs_stats.rate();
    report.total_mer = 100.0 * report.total_stats.rate();
  }
  report.metadata["normalization"] = std::string(kNormalizationVersion);
  return report;
}

namespace {

json StatsJson(const EditStats& s) {
  return json{{"substitutions", s.substitutions},
              {"deletions", s.deletions},
              {"insertions", s.insertions},
              {"ref_len", s.ref_len}};
}

json OptionalJson(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string Cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v);
  return buf;
}

}  // namespace

json EvalReport::ToJson() const {
  json utts = json::array();
  for (const auto& u : utterances) {
    json j{{"id", u.id},
           {"class", UtteranceClassName(u.cls)},
           {"reference", u.reference},
           {"hypothesis", u.hypothesis},
           {"mixed", StatsJson(u.mixed)},
           {"category", StatsJson(u.category)}};
    if (!u.prompt.empty()) j["prompt"] = u.prompt;
    utts.push_back(std::move(j));
  }
  json fails = json::array();
  for (const auto& f : failures) fails.push_back({{"id", f.id}, {"error", f.error}});
  return json{{"format", "wprompt-report"},
              {"version", kReportFormatVersion},
              {"task", ScoreTaskName(task)},
              {"metadata", metadata},
              {"metrics",
               {{"zh_cer", OptionalJson(zh_cer)},
                {"en_wer", OptionalJson(en_wer)},
                {"cs_mer", OptionalJson(cs_mer)},
                {"total_mer", OptionalJson(total_mer)},
                {"corpus_bleu", OptionalJson(corpus_bleu)}}},
              {"totals",
               {{"zh", StatsJson(zh_stats)},
                {"en", StatsJson(en_stats)},
                {"cs", StatsJson(cs_stats)},
                {"all", StatsJson(total_stats)}}},
              {"utterances", std::move(utts)},
              {"failures", std::move(fails)}};
}

std::string EvalReport::ToTable() const {
  std::ostringstream out;
  char line[160];
  if (task == ScoreTask::kSt) {
    std::snprintf(line, sizeof(line), "%-10s %10s\n", "Task", "BLEU");
    out << line;
    std::snprintf(line, sizeof(line), "%-10s %10s\n", ScoreTaskName(task),
                  Cell(corpus_bleu).c_str());
    out << line;
  } else {
    std::snprintf(line, sizeof(line), "%-10s %8s %8s %8s %10s\n", "Task",
                  "Zh CER", "En WER", "CS MER", "Total MER");
    out << line;
    std::snprintf(line, sizeof(line), "%-10s %8s %8s %8s %10s\n",
                  ScoreTaskName(task), Cell(zh_cer).c_str(),
                  Cell(en_wer).c_str(), Cell(cs_mer).c_str(),
                  Cell(total_mer).c_str());
    out << line;
  }
  out << "utterances: " << utterances.size()
      << "  failures: " << failures.size() << "\n";
  return out.str();
}

}  // namespace wprompt
