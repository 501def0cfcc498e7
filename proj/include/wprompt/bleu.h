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

#ifndef WPROMPT_BLEU_H_
#define WPROMPT_BLEU_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wprompt {

enum class BleuTokenization { kWord, kChar };
// kNone: any zero n-gram precision gives 0. kAddOne: add-one on n >= 2.
enum class BleuSmoothing { kNone, kAddOne };

struct BleuStats {
  std::array<std::int64_t, 4> matches{};
  std::array<std::int64_t, 4> totals{};
  std::int64_t ref_len = 0;
  std::int64_t hyp_len = 0;

  BleuStats& operator+=(const BleuStats& o);
};

BleuStats SentenceBleuStats(std::span<const std::string> ref,
                            std::span<const std::string> hyp);

// Corpus BLEU-4 in [0, 100] from accumulated statistics.
double BleuFromStats(const BleuStats& stats,
                     BleuSmoothing smoothing = BleuSmoothing::kNone);

// (reference, hypothesis) pairs.
double CorpusBleu(std::span<const std::pair<std::string, std::string>> pairs,
                  BleuTokenization tokenization,
                  BleuSmoothing smoothing = BleuSmoothing::kNone);

}  // namespace wprompt

#endif  // WPROMPT_BLEU_H_
