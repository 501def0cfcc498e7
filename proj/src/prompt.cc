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

#include "wprompt/prompt.h"

#include <algorithm>

#include "wprompt/errors.h"

namespace wprompt {

std::size_t SerializedLength(const PromptSequence& prompt) {
  std::size_t n = 1 + prompt.languages.size() + 1;  // sot, languages, task
  if (!prompt.previous_text.empty()) n += 1 + prompt.previous_text.size();
  if (prompt.no_timestamps) ++n;
  return n;
}

void ValidatePrompt(const PromptSequence& prompt, const SpecialTokens& specials,
                    int budget) {
  if (prompt.languages.empty() || prompt.languages.size() > 2) {
    throw PromptError("prompt needs one or two language tokens, got " +
                      std::to_string(prompt.languages.size()));
  }
  for (const auto& code : prompt.languages) {
    if (!specials.HasLanguage(code)) {
      throw PromptError("unknown language: " + code);
    }
  }
  if (prompt.languages.size() == 2 &&
      prompt.languages[0] == prompt.languages[1]) {
    throw PromptError("duplicate language: " + prompt.languages[0]);
  }
  for (std::size_t i = 0; i < prompt.previous_text.size(); ++i) {
    if (prompt.previous_text[i] < 0 ||
        specials.IsSpecial(prompt.previous_text[i])) {
      throw PromptError("previous text contains a special token", i + 1);
    }
  }
  if (SerializedLength(prompt) > static_cast<std::size_t>(budget)) {
    throw PromptError("prompt budget exceeded: " +
                      std::to_string(SerializedLength(prompt)) + " > " +
                      std::to_string(budget));
  }
}

PromptSequence FitToBudget(PromptSequence prompt, int budget) {
  PromptSequence fixed = prompt;
  fixed.previous_text.clear();
  const std::size_t fixed_len = SerializedLength(fixed);
  if (budget < 0 || fixed_len > static_cast<std::size_t>(budget)) {
    throw PromptError("prompt budget exceeded: fixed part needs " +
                      std::to_string(fixed_len) + " tokens");
  }
  // The <|sop|> marker costs one token on top of the kept text.
  const std::size_t room = static_cast<std::size_t>(budget) - fixed_len;
  const std::size_t keep = room > 0 ? room - 1 : 0;
  auto& prev = prompt.previous_text;
  if (prev.size() > keep) {
    prev.erase(prev.begin(), prev.end() - static_cast<std::ptrdiff_t>(keep));
  }
  return prompt;
}

std::vector<TokenId> SerializePrompt(const PromptSequence& prompt,
                                     const SpecialTokens& specials,
                                     int budget) {
  ValidatePrompt(prompt, specials, budget);
  std::vector<TokenId> out;
  out.reserve(SerializedLength(prompt));
  if (!prompt.previous_text.empty()) {
    out.push_back(specials.sop);
    out.insert(out.end(), prompt.previous_text.begin(),
               prompt.previous_text.end());
  }
  out.push_back(specials.sot);
  for (const auto& code : prompt.languages) {
    out.push_back(*specials.LanguageToken(code));
  }
  out.push_back(specials.TaskToken(prompt.task));
  if (prompt.no_timestamps) out.push_back(specials.no_timestamps);
  return out;
}

PromptSequence ParsePrompt(std::span<const TokenId> tokens,
                           const SpecialTokens& specials) {
  PromptSequence prompt;
  std::size_t i = 0;
  const std::size_t n = tokens.size();
  auto expect_more = [&](const char* what) {
    if (i >= n) throw PromptError(std::string("missing ") + what, i);
  };

  expect_more("<|sot|>");
  if (tokens[i] == specials.sop) {
    ++i;
    while (i < n && !specials.IsSpecial(tokens[i])) {
      prompt.previous_text.push_back(tokens[i++]);
    }
    if (prompt.previous_text.empty()) {
      throw PromptError("empty previous text after <|sop|>", i);
    }
    expect_more("<|sot|>");
  }
  if (tokens[i] != specials.sot) throw PromptError("expected <|sot|>", i);
  ++i;

  while (i < n) {
    auto code = specials.LanguageOf(tokens[i]);
    if (!code) break;
    if (prompt.languages.size() == 2) {
      throw PromptError("more than two language tokens", i);
    }
    if (!prompt.languages.empty() && prompt.languages.front() == *code) {
      throw PromptError("duplicate language token", i);
    }
    prompt.languages.push_back(*code);
    ++i;
  }
  if (prompt.languages.empty()) {
    throw PromptError("expected a language token", i);
  }

  expect_more("task token");
  if (tokens[i] == specials.asr) {
    prompt.task = Task::kAsr;
  } else if (tokens[i] == specials.st) {
    prompt.task = Task::kSt;
  } else {
    throw PromptError("expected a task token", i);
  }
  ++i;

  prompt.no_timestamps = false;
  if (i < n && tokens[i] == specials.no_timestamps) {
    prompt.no_timestamps = true;
    ++i;
  }
  if (i != n) throw PromptError("unexpected token after prompt", i);
  return prompt;
}

const char* TaskName(Task task) { return task == Task::kAsr ? "asr" : "st"; }

Task ParseTask(std::string_view name) {
  if (name == "asr") return Task::kAsr;
  if (name == "st") return Task::kSt;
  throw ConfigError("unknown task: " + std::string(name));
}

}  // namespace wprompt
