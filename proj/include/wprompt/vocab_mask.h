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

#ifndef WPROMPT_VOCAB_MASK_H_
#define WPROMPT_VOCAB_MASK_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wprompt/types.h"
#include "wprompt/vocabulary.h"

namespace wprompt {

// Allow-set over the token vocabulary. The end-of-text token is always
// allowed; no operation can clear it.
class VocabMask {
 public:
  // Everything but `eot` disallowed.
  VocabMask(int size, TokenId eot, std::string description);

  int size() const { return size_; }
  TokenId eot() const { return eot_; }
  const std::string& description() const { return description_; }

  bool allowed(TokenId id) const {
    return id >= 0 && id < size_ && ((words_[id >> 6] >> (id & 63)) & 1u);
  }
  void Allow(TokenId id);
  void Disallow(TokenId id);  // no-op for eot
  int CountAllowed() const;
  std::vector<TokenId> AllowedTokens() const;

  // Text form:
  //   vocab_mask v1 size <N> eot <E> allowed <M>
  //   description <text>
  //   <base64 bitset: bit i is bit (i % 8) of byte (i / 8)>
  std::string ToText() const;
  static VocabMask FromText(std::string_view text);
  static VocabMask Load(const std::string& path);

  bool operator==(const VocabMask& other) const {
    return size_ == other.size_ && eot_ == other.eot_ &&
           words_ == other.words_;
  }

 private:
  friend VocabMask Intersect(const VocabMask& a, const VocabMask& b);

  int size_;
  TokenId eot_;
  std::string description_;
  std::vector<std::uint64_t> words_;
};

// Named set of inclusive code-point ranges, kept sorted and disjoint.
struct ScriptSpec {
  std::string name;
  std::vector<std::pair<char32_t, char32_t>> ranges;

  // Sorts and validates; throws ConfigError on inverted or overlapping ranges.
  static ScriptSpec Make(std::string name,
                         std::vector<std::pair<char32_t, char32_t>> ranges);
  bool Contains(char32_t cp) const;
};

const ScriptSpec& CjkScript();
const ScriptSpec& CyrillicScript();
const ScriptSpec& ArabicScript();
// "cjk", "cyrillic" or "arabic".
std::optional<ScriptSpec> NamedScript(std::string_view name);

// Script config text: "script <name>" followed by "range <lo-hex> <hi-hex>"
// lines; '#' starts a comment line.
std::vector<ScriptSpec> ParseScriptConfig(std::string_view text);
std::vector<ScriptSpec> LoadScriptConfig(const std::string& path);

// True if `bytes` is complete UTF-8 and every letter or mark in it falls
// inside the script.
bool TokenFitsScript(std::string_view bytes, const ScriptSpec& spec);

// Non-special tokens plus eot.
VocabMask FullTextMask(const Tokenizer& tokenizer,
                       const SpecialTokens& specials);

VocabMask BuildScriptMask(const ScriptSpec& spec, const Tokenizer& tokenizer,
                          const SpecialTokens& specials);

struct FrequencyMaskConfig {
  double percent = 100.0;  // (0, 100]
  std::string corpus;      // training text
};

// Keeps the top ceil(percent% x distinct observed types) token types of the
// tokenized corpus, ranked by count with ties to the lower id.
VocabMask BuildFrequencyMask(const FrequencyMaskConfig& cfg,
                             const Tokenizer& tokenizer,
                             const SpecialTokens& specials);

// Frequency cut used for German (40) and French (50) targets; nullopt for
// languages without a tuned value.
std::optional<double> DefaultFrequencyPercent(std::string_view language);

// Admits exactly the given language tokens (and eot). Used at the LID step.
VocabMask RestrictLanguages(std::span<const std::string> allowed,
                            int vocab_size, const SpecialTokens& specials);

VocabMask Intersect(const VocabMask& a, const VocabMask& b);

}  // namespace wprompt

#endif  // WPROMPT_VOCAB_MASK_H_
