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

#ifndef WPROMPT_TESTS_ORACLES_H_
#define WPROMPT_TESTS_ORACLES_H_

// Reference implementations written independently of the library, used to
// cross-check it on random inputs.

#include <array>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wprompt/retrieval.h"
#include "wprompt/types.h"

namespace wprompt::testing {

using Ranges = std::vector<std::pair<char32_t, char32_t>>;

// Code-point blocks, typed in from the Unicode charts.
Ranges OracleCjkRanges();
Ranges OracleCyrillicRanges();
Ranges OracleArabicRanges();

// Strict UTF-8 decode by hand; false on any malformed sequence.
bool OracleDecodeUtf8(std::string_view bytes, std::u32string& out);

// Allowed iff valid UTF-8 and every letter/mark lies inside a range.
bool OracleScriptAllows(std::string_view bytes, const Ranges& ranges);

// Random short byte strings: in-script and foreign letters, digits,
// punctuation, combining marks, whitespace and broken UTF-8.
std::string RandomTokenBytes(std::mt19937_64& rng, const Ranges& home);

// Top ceil(percent * types / 100) token types by (count desc, id asc).
// percent is an integer so the cut is exact.
std::set<TokenId> OracleFrequencyAllowed(const std::vector<TokenId>& corpus,
                                         int percent);

// Shortest path in the graph of strings over a small alphabet, where edges
// are single insertions, deletions and substitutions.
class EditGraphOracle {
 public:
  EditGraphOracle(std::string alphabet, int max_len);
  const std::vector<std::string>& strings() const { return strings_; }
  int Distance(std::size_t from, std::size_t to) const {
    return dist_[from * strings_.size() + to];
  }

 private:
  std::vector<std::string> strings_;
  std::vector<int> dist_;
};

// Double loop over every frame and index entry on raw vectors.
std::vector<ScoredLabel> OracleRetrieve(
    const std::vector<std::vector<float>>& frames,
    const std::vector<std::string>& labels,
    const std::vector<std::vector<float>>& embeddings, int top_k, bool mean);

// Corpus BLEU-4 from n-gram maps, no smoothing.
double OracleBleu(
    const std::vector<std::pair<std::vector<std::string>,
                                std::vector<std::string>>>& ref_hyp);

struct LidCase {
  double zh;
  double en;
  double threshold;
  const char* expected;  // rendered prompt without <|notimestamps|>
};
extern const std::array<LidCase, 50> kLidCases;

}  // namespace wprompt::testing

#endif  // WPROMPT_TESTS_ORACLES_H_
