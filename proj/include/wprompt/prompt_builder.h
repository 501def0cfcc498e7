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

#ifndef WPROMPT_PROMPT_BUILDER_H_
#define WPROMPT_PROMPT_BUILDER_H_

#include <array>
#include <span>
#include <string>

#include "wprompt/lid.h"
#include "wprompt/prompt.h"
#include "wprompt/vocabulary.h"

namespace wprompt {

// Two-language ("concat") prompting for code-switched speech. The language
// order here is the order the tokens appear in the prompt.
struct ConcatConfig {
  std::array<std::string, 2> languages{"zh", "en"};
  // Single-language prompt when LID confidence >= threshold. A threshold of
  // 1.0 always concatenates.
  double lid_threshold = 1.0;

  void Validate(const SpecialTokens& specials) const;
  bool AlwaysConcat() const { return lid_threshold >= 1.0; }
};

struct VisualPromptConfig {
  int top_k = 50;
  std::string separator = ", ";
};

PromptSequence BuildDefaultPrompt(const SpecialTokens& specials,
                                  const std::string& language, Task task);

// Object labels (best first) go into the previous-text slot ahead of the
// default English ASR prompt.
PromptSequence BuildVisualPrompt(std::span<const std::string> objects,
                                 const VisualPromptConfig& cfg,
                                 const std::string& language,
                                 const Tokenizer& tokenizer,
                                 const SpecialTokens& specials,
                                 int budget = kDefaultPromptBudget);

// Joined label text placed in the previous-text slot.
std::string JoinObjectLabels(std::span<const std::string> objects,
                             const VisualPromptConfig& cfg);

PromptSequence BuildCsPrompt(const LidResult& lid, const ConcatConfig& cfg,
                             const SpecialTokens& specials);

// En->X translation: the target language token with the *transcribe* task.
PromptSequence BuildStPrompt(const SpecialTokens& specials,
                             const std::string& target);

}  // namespace wprompt

#endif  // WPROMPT_PROMPT_BUILDER_H_
