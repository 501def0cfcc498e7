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

#include "wprompt/prompt_builder.h"

#include <algorithm>

#include "wprompt/errors.h"

namespace wprompt {
namespace {

void RequireLanguage(const SpecialTokens& specials, const std::string& code) {
  if (!specials.HasLanguage(code)) {
    throw ConfigError("unknown language: " + code);
  }
}

}  // namespace

void ConcatConfig::Validate(const SpecialTokens& specials) const {
  RequireLanguage(specials, languages[0]);
  RequireLanguage(specials, languages[1]);
  if (languages[0] == languages[1]) {
    throw ConfigError("concat languages must differ");
  }
  if (!(lid_threshold >= 0.0 && lid_threshold <= 1.0)) {
    throw ConfigError("lid_threshold must be in [0, 1]");
  }
}

PromptSequence BuildDefaultPrompt(const SpecialTokens& specials,
                                  const std::string& language, Task task) {
  RequireLanguage(specials, language);
  PromptSequence prompt;
  prompt.languages = {language};
  prompt.task = task;
  return prompt;
}

std::string JoinObjectLabels(std::span<const std::string> objects,
                             const VisualPromptConfig& cfg) {
  const std::size_t k =
      std::min(objects.size(), static_cast<std::size_t>(std::max(cfg.top_k, 0)));
  std::string text;
  for (std::size_t i = 0; i < k; ++i) {
    if (i > 0) text += cfg.separator;
    text += objects[i];
  }
  return text;
}

PromptSequence BuildVisualPrompt(std::span<const std::string> objects,
                                 const VisualPromptConfig& cfg,
                                 const std::string& language,
                                 const Tokenizer& tokenizer,
                                 const SpecialTokens& specials, int budget) {
  if (objects.empty()) throw ConfigError("visual prompt needs object labels");
  if (cfg.top_k < 1) throw ConfigError("top_k must be >= 1");
  PromptSequence prompt = BuildDefaultPrompt(specials, language, Task::kAsr);
  prompt.previous_text = tokenizer.Encode(JoinObjectLabels(objects, cfg));
  return FitToBudget(std::move(prompt), budget);
}

PromptSequence BuildCsPrompt(const LidResult& lid, const ConcatConfig& cfg,
                             const SpecialTokens& specials) {
  cfg.Validate(specials);
  if (lid.argmax != cfg.languages[0] && lid.argmax != cfg.languages[1]) {
    throw ConfigError("LID argmax '" + lid.argmax +
                      "' is outside the concat language pair");
  }
  PromptSequence prompt;
  prompt.task = Task::kAsr;
  if (!cfg.AlwaysConcat() && lid.confidence >= cfg.lid_threshold) {
    prompt.languages = {lid.argmax};
  } else {
    prompt.languages = {cfg.languages[0], cfg.languages[1]};
  }
  return prompt;
}

PromptSequence BuildStPrompt(const SpecialTokens& specials,
                             const std::string& target) {
  return BuildDefaultPrompt(specials, target, Task::kAsr);
}

}  // namespace wprompt
