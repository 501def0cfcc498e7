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

#ifndef WPROMPT_RUNNER_H_
#define WPROMPT_RUNNER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wprompt/manifest.h"
#include "wprompt/run_config.h"
#include "wprompt/scoring.h"

namespace wprompt {

// Bookkeeping that must not leak into reports (it differs between a cold
// and a warm cache).
struct RunStats {
  long long step_calls = 0;
  int hyp_hits = 0;
  int hyp_misses = 0;
  int lid_hits = 0;
  int lid_misses = 0;
  bool backend_started = false;
};

struct RunResult {
  EvalReport report;
  RunStats stats;
};

inline constexpr const char* kHypothesisRecipe = "wprompt-hyp-v1";
inline constexpr const char* kLidRecipe = "wprompt-lid-v1";

// Throws ConfigError / ManifestError when the inputs are inconsistent.
// Record-level problems (backend down, decode failure, bad frames) land in
// report.failures. Writes report.json and report.txt when cfg.output_dir is
// set.
RunResult RunEval(const Manifest& manifest, const RunConfig& cfg);

// sha256 over the config fingerprint and the manifest digest.
std::string ConfigHash(const Manifest& manifest, const RunConfig& cfg);

void WriteReport(const EvalReport& report, const std::string& dir);

enum class SweepParam { kTopK, kLidThreshold, kFrequencyPercent };

const char* SweepParamName(SweepParam p);
SweepParam ParseSweepParam(std::string_view name);

struct SweepSpec {
  SweepParam param = SweepParam::kTopK;
  std::vector<double> values;

  void Validate() const;
  // Returns cfg with the parameter set to value; throws ConfigError if the
  // config has nothing to sweep (e.g. top_k without a visual policy).
  RunConfig Apply(const RunConfig& cfg, double value) const;
};

struct SweepEntry {
  double value = 0.0;
  EvalReport report;
  RunStats stats;
  std::size_t cache_entries = 0;  // hypothesis entries after this run
};

struct SweepResult {
  SweepParam param = SweepParam::kTopK;
  std::vector<SweepEntry> entries;  // in input order
  std::vector<std::size_t> ranking;  // indices into entries, best first
  std::vector<double> top_values;    // up to three
  // Over the top three: mean of their rates, and errors pooled across them.
  // Rates are Total MER (BLEU for st; pooled stays empty there).
  std::optional<double> top_mean;
  std::optional<double> top_pooled;

  nlohmann::json ToJson() const;
  std::string ToTable() const;
};

// Lower is better except BLEU. Empty when the run produced no metric.
std::optional<double> RankingMetric(const EvalReport& report);

// Per-value outputs go to <output_dir>/<param>=<value>/, the summary to
// <output_dir>/sweep.{json,txt}.
SweepResult RunSweep(const Manifest& manifest, const RunConfig& cfg,
                     const SweepSpec& sweep);

std::string FormatValue(double v);

}  // namespace wprompt

#endif  // WPROMPT_RUNNER_H_
