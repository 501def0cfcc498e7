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

#ifndef WPROMPT_TEXT_NORMALIZER_H_
#define WPROMPT_TEXT_NORMALIZER_H_

#include <string>
#include <string_view>
#include <vector>

namespace wprompt {

// Bumped whenever normalization output changes; recorded in every report.
inline constexpr std::string_view kNormalizationVersion = "norm-v1";

// english:  lowercase, punctuation (category P) to space except apostrophes
//           inside words, whitespace collapsed and trimmed
// mixed:    english + no spaces between two adjacent CJK characters
// mandarin: english + all whitespace removed
enum class NormalizationProfile { kEnglish, kMandarin, kMixed };

std::string Normalize(std::string_view text,
                      NormalizationProfile profile = NormalizationProfile::kMixed);

bool IsCjk(char32_t cp);
bool ContainsCjk(std::string_view text);

struct MixedToken {
  enum class Kind { kCjkChar, kWord };
  std::string surface;
  Kind kind;

  bool operator==(const MixedToken&) const = default;
};

// One token per CJK character; the remaining runs split on whitespace.
std::vector<MixedToken> MixedTokenize(std::string_view text);
std::vector<std::string> MixedSurfaces(std::string_view text);
// Every non-whitespace character.
std::vector<std::string> CharTokenize(std::string_view text);
// Whitespace-separated words.
std::vector<std::string> WordTokenize(std::string_view text);

}  // namespace wprompt

#endif  // WPROMPT_TEXT_NORMALIZER_H_
