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

#ifndef WPROMPT_VOCABULARY_H_
#define WPROMPT_VOCABULARY_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wprompt/types.h"

namespace wprompt {

struct LanguageCode {
  std::string code;
  TokenId token = 0;

  bool operator==(const LanguageCode&) const = default;
};

// Control tokens of the decoder prompt plus the language registry.
struct SpecialTokens {
  TokenId sop = 0;            // <|startofprev|>
  TokenId sot = 0;            // <|startoftranscript|>
  TokenId eot = 0;            // <|endoftext|>
  TokenId asr = 0;            // <|transcribe|>
  TokenId st = 0;             // <|translate|>
  TokenId no_timestamps = 0;  // <|notimestamps|>
  // Registry in manifest order.
  std::vector<LanguageCode> languages;

  std::optional<TokenId> LanguageToken(std::string_view code) const;
  // Language code for a language token id, or nullopt.
  std::optional<std::string> LanguageOf(TokenId id) const;
  bool HasLanguage(std::string_view code) const;
  TokenId TaskToken(Task task) const { return task == Task::kAsr ? asr : st; }
  // True for any control or language token.
  bool IsSpecial(TokenId id) const;
  // Short display name ("sot", "en", "notimestamps", ...) or nullopt.
  std::optional<std::string> DisplayName(TokenId id) const;
};

// Vocabulary manifest names for the control tokens.
inline constexpr std::string_view kSpecialSop = "sop";
inline constexpr std::string_view kSpecialSot = "sot";
inline constexpr std::string_view kSpecialEot = "eot";
inline constexpr std::string_view kSpecialAsr = "asr";
inline constexpr std::string_view kSpecialSt = "st";
inline constexpr std::string_view kSpecialNoTimestamps = "no_timestamps";
inline constexpr std::string_view kLanguagePrefix = "lang:";

// Immutable token table loaded from a vocabulary manifest.
//
// Manifest format (UTF-8, one record per line, '\n' terminated):
//   vocab_size <N>
//   token <id> <base64 bytes>      one line per id, ids 0..N-1
//   special <name> <id>            sop, sot, eot, asr, st, no_timestamps and
//                                  one lang:<code> per registered language
class Vocabulary {
 public:
  struct SpecialEntry {
    std::string name;
    TokenId id;
  };

  Vocabulary(std::vector<std::string> token_bytes,
             std::vector<SpecialEntry> specials);

  static Vocabulary Parse(std::string_view manifest);
  static Vocabulary Load(const std::string& path);
  std::string ToManifest() const;

  int size() const { return static_cast<int>(token_bytes_.size()); }
  const std::string& token_bytes(TokenId id) const;
  const SpecialTokens& specials() const { return specials_; }
  const std::vector<SpecialEntry>& special_table() const {
    return special_table_;
  }
  bool IsSpecial(TokenId id) const;

 private:
  std::vector<std::string> token_bytes_;
  std::vector<SpecialEntry> special_table_;
  std::vector<bool> is_special_;
  SpecialTokens specials_;
};

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;

  // Never yields special tokens.
  virtual std::vector<TokenId> Encode(std::string_view text) const = 0;
  // Concatenated bytes of the non-special tokens.
  virtual std::string Decode(std::span<const TokenId> tokens) const = 0;
  virtual const std::string& TokenBytes(TokenId id) const = 0;
  virtual int vocab_size() const = 0;
  virtual bool IsSpecial(TokenId id) const = 0;
};

// Greedy longest-match over the manifest's token byte strings. Not identical
// to BPE merging; decode(encode(t)) == t for any text the vocabulary covers.
class GreedyTokenizer : public Tokenizer {
 public:
  explicit GreedyTokenizer(std::shared_ptr<const Vocabulary> vocab);

  std::vector<TokenId> Encode(std::string_view text) const override;
  std::string Decode(std::span<const TokenId> tokens) const override;
  const std::string& TokenBytes(TokenId id) const override;
  int vocab_size() const override { return vocab_->size(); }
  bool IsSpecial(TokenId id) const override { return vocab_->IsSpecial(id); }

  const Vocabulary& vocabulary() const { return *vocab_; }

 private:
  std::shared_ptr<const Vocabulary> vocab_;
  std::unordered_map<std::string, TokenId> by_bytes_;
  std::size_t max_token_length_ = 0;
};

struct LoadedVocabulary {
  std::shared_ptr<const Vocabulary> vocab;
  std::shared_ptr<const GreedyTokenizer> tokenizer;
  const SpecialTokens& specials() const { return vocab->specials(); }
};

LoadedVocabulary LoadVocabManifest(const std::string& path);
LoadedVocabulary MakeLoadedVocabulary(Vocabulary vocab);

// Renders tokens for display: text tokens verbatim, control tokens as
// <|sot|>, <|en|>, ... When `show_no_timestamps` is false the
// <|notimestamps|> token is omitted.
std::string RenderTokens(std::span<const TokenId> tokens, const Tokenizer& tok,
                         const SpecialTokens& specials,
                         bool show_no_timestamps = true);

}  // namespace wprompt

#endif  // WPROMPT_VOCABULARY_H_
