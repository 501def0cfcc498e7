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

#ifndef WPROMPT_RUN_CONFIG_H_
#define WPROMPT_RUN_CONFIG_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wprompt/backend_factory.h"
#include "wprompt/decoder.h"
#include "wprompt/prompt_builder.h"
#include "wprompt/retrieval.h"
#include "wprompt/scoring.h"

namespace wprompt {

enum class PolicyKind { kDefault, kVisual, kConcat, kSt };

const char* PolicyName(PolicyKind kind);

struct VisualPolicy {
  VisualPromptConfig prompt;
  int frame_count = 3;
  FrameAggregation aggregation = FrameAggregation::kMax;
  std::string index_path;
  std::string language;  // empty: record language, else "en"
};

struct ConcatPolicy {
  // Empty: use the record's two languages.
  std::vector<std::string> languages;
  double lid_threshold = 1.0;
};

// One mask constraint. Several are intersected.
struct MaskSpec {
  enum class Kind { kScript, kFrequency, kFile };
  Kind kind = Kind::kScript;
  std::string script;       // built-in name, or name inside script_file
  std::string script_file;
  std::string corpus_path;  // frequency corpus
  std::optional<double> percent;
  std::string language;     // default percent lookup when percent is unset
  std::string file;         // precomputed mask

  nlohmann::json ToJson() const;
};

// JSON config file. Relative paths resolve against the file's directory.
struct RunConfig {
  std::string vocab_path;
  BackendSpec backend;
  std::string backend_tag;
  PolicyKind policy = PolicyKind::kDefault;
  VisualPolicy visual;
  ConcatPolicy concat;
  std::vector<MaskSpec> masks;
  DecodeConfig decode;  // mask field unused here
  std::string output_dir;
  std::string cache_dir;
  int workers = 1;
  int prompt_budget = kDefaultPromptBudget;

  static RunConfig FromJson(const nlohmann::json& j,
                            const std::string& base_dir);
  static RunConfig Load(const std::string& path);

  // Throws ConfigError unless the policy can serve this task.
  void CheckTask(ScoreTask task) const;

  // Everything that can change a report, with files replaced by their
  // sha256. Paths, output_dir, cache_dir and workers are left out.
  nlohmann::json Fingerprint() const;
};

}  // namespace wprompt

#endif  // WPROMPT_RUN_CONFIG_H_
