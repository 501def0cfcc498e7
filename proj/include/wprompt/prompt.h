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

#ifndef WPROMPT_PROMPT_H_
#define WPROMPT_PROMPT_H_

#include <span>
#include <string>
#include <vector>

#include "wprompt/types.h"
#include "wprompt/vocabulary.h"

namespace wprompt {

// Decoder prompt:
//   [<|sop|> previous-text...] <|sot|> <|lang|>{1,2} <|task|> [<|notimestamps|>]
// The <|sop|> block is present iff previous_text is non-empty.
struct PromptSequence {
  std::vector<TokenId> previous_text;
  std::vector<std::string> languages;
  Task task = Task::kAsr;
  bool no_timestamps = true;

  bool operator==(const PromptSequence&) const = default;
};

std::size_t SerializedLength(const PromptSequence& prompt);

// Throws PromptError if `prompt` breaks the grammar invariants or its
// serialized length exceeds `budget`.
void ValidatePrompt(const PromptSequence& prompt, const SpecialTokens& specials,
                    int budget = kDefaultPromptBudget);

// Drops the oldest previous-text tokens until the prompt fits `budget`.
// Throws PromptError if the fixed part alone does not fit.
PromptSequence FitToBudget(PromptSequence prompt,
                           int budget = kDefaultPromptBudget);

std::vector<TokenId> SerializePrompt(const PromptSequence& prompt,
                                     const SpecialTokens& specials,
                                     int budget = kDefaultPromptBudget);

PromptSequence ParsePrompt(std::span<const TokenId> tokens,
                           const SpecialTokens& specials);

const char* TaskName(Task task);
// "asr" / "st"; throws ConfigError otherwise.
Task ParseTask(std::string_view name);

}  // namespace wprompt

#endif  // WPROMPT_PROMPT_H_
