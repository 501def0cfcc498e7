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

#include "wprompt/text_normalizer.h"

#include "wprompt/errors.h"
#include "wprompt/utf8.h"
#include "wprompt/vocab_mask.h"

namespace wprompt {
namespace {

std::u32string DecodeOrThrow(std::string_view text) {
  auto cps = DecodeUtf8(text);
  if (!cps) throw Error("text is not valid UTF-8");
  return *cps;
}

bool IsApostrophe(char32_t cp) { return cp == U'\'' || cp == U'’'; }

}  // namespace

bool IsCjk(char32_t cp) { return CjkScript().Contains(cp); }

bool ContainsCjk(std::string_view text) {
  auto cps = DecodeUtf8(text);
  if (!cps) return false;
  for (char32_t cp : *cps) {
    if (IsCjk(cp) && !IsWhitespace(cp)) return true;
  }
  return false;
}

std::string Normalize(std::string_view text, NormalizationProfile profile) {
  const std::u32string in = DecodeOrThrow(text);
  std::u32string mapped;
  mapped.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    char32_t cp = in[i];
    if (IsWhitespace(cp)) {
      mapped.push_back(U' ');
    } else if (IsPunctuation(cp)) {
      const bool inside_word = IsApostrophe(cp) && i > 0 && i + 1 < in.size() &&
                               IsAlphabetic(in[i - 1]) && IsAlphabetic(in[i + 1]);
      mapped.push_back(inside_word ? U'\'' : U' ');
    } else {
      mapped.push_back(ToLower(cp));
    }
  }

  // Collapse whitespace; drop the spaces the profile says to drop.
  std::u32string out;
  out.reserve(mapped.size());
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    if (mapped[i] != U' ') {
      out.push_back(mapped[i]);
      continue;
    }
    std::size_t j = i;
    while (j < mapped.size() && mapped[j] == U' ') ++j;
    const bool at_edge = out.empty() || j == mapped.size();
    bool keep = !at_edge;
    if (keep && profile == NormalizationProfile::kMandarin) keep = false;
    if (keep && profile == NormalizationProfile::kMixed &&
        IsCjk(out.back()) && IsCjk(mapped[j])) {
      keep = false;
    }
    if (keep) out.push_back(U' ');
    i = j - 1;
  }
  return EncodeUtf8(out);
}

std::vector<MixedToken> MixedTokenize(std::string_view text) {
  const std::u32string cps = DecodeOrThrow(text);
  std::vector<MixedToken> tokens;
  std::u32string word;
  auto flush = [&] {
    if (!word.empty()) {
      tokens.push_back({EncodeUtf8(word), MixedToken::Kind::kWord});
      word.clear();
    }
  };
  for (char32_t cp : cps) {
    if (IsWhitespace(cp)) {
      flush();
    } else if (IsCjk(cp)) {
      flush();
      tokens.push_back({EncodeUtf8(cp), MixedToken::Kind::kCjkChar});
    } else {
      word.push_back(cp);
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> MixedSurfaces(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : MixedTokenize(text)) out.push_back(std::move(t.surface));
  return out;
}

std::vector<std::string> CharTokenize(std::string_view text) {
  std::vector<std::string> out;
  for (char32_t cp : DecodeOrThrow(text)) {
    if (!IsWhitespace(cp)) out.push_back(EncodeUtf8(cp));
  }
  return out;
}

std::vector<std::string> WordTokenize(std::string_view text) {
  std::vector<std::string> out;
  std::u32string word;
  for (char32_t cp : DecodeOrThrow(text)) {
    if (IsWhitespace(cp)) {
      if (!word.empty()) out.push_back(EncodeUtf8(word));
      word.clear();
    } else {
      word.push_back(cp);
    }
  }
  if (!word.empty()) out.push_back(EncodeUtf8(word));
  return out;
}

}  // namespace wprompt
