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

#include "wprompt/bleu.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "wprompt/text_normalizer.h"

namespace wprompt {
namespace {

using NgramCounts = std::map<std::vector<std::string>, std::int64_t>;

NgramCounts CountNgrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i,
                                      tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

BleuStats& BleuStats::operator+=(const BleuStats& o) {
  for (std::size_t n = 0; n < 4; ++n) {
    matches[n] += o.matches[n];
    totals[n] += o.totals[n];
  }
  ref_len += o.ref_len;
  hyp_len += o.hyp_len;
  return *this;
}

BleuStats SentenceBleuStats(std::span<const std::string> ref,
                            std::span<const std::string> hyp) {
  BleuStats stats;
  stats.ref_len = static_cast<std::int64_t>(ref.size());
  stats.hyp_len = static_cast<std::int64_t>(hyp.size());
  for (std::size_t n = 1; n <= 4; ++n) {
    NgramCounts hyp_counts = CountNgrams(hyp, n);
    NgramCounts ref_counts = CountNgrams(ref, n);
    for (const auto& [gram, count] : hyp_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) stats.matches[n - 1] += std::min(count, it->second);
      stats.totals[n - 1] += count;
    }
  }
  return stats;
}

double BleuFromStats(const BleuStats& stats, BleuSmoothing smoothing) {
  if (stats.hyp_len == 0) return 0.0;
  double log_precision = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    double matches = static_cast<double>(stats.matches[n]);
    double totals = static_cast<double>(stats.totals[n]);
    if (smoothing == BleuSmoothing::kAddOne && n > 0) {
      matches += 1.0;
      totals += 1.0;
    }
    if (matches <= 0.0 || totals <= 0.0) return 0.0;
    log_precision += std::log(matches / totals) / 4.0;
  }
  double brevity = 0.0;
  if (stats.hyp_len < stats.ref_len) {
    brevity = 1.0 - static_cast<double>(stats.ref_len) / stats.hyp_len;
  }
  return 100.0 * std::exp(log_precision + brevity);
}

double CorpusBleu(std::span<const std::pair<std::string, std::string>> pairs,
                  BleuTokenization tokenization, BleuSmoothing smoothing) {
  BleuStats total;
  for (const auto& [ref, hyp] : pairs) {
    if (tokenization == BleuTokenization::kChar) {
      total += SentenceBleuStats(CharTokenize(ref), CharTokenize(hyp));
    } else {
      total += SentenceBleuStats(WordTokenize(ref), WordTokenize(hyp));
    }
  }
  return BleuFromStats(total, smoothing);
}

}  // namespace wprompt
