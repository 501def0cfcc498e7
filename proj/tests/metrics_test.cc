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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.h"
#include "wprompt/bleu.h"
#include "wprompt/edit_distance.h"
#include "wprompt/errors.h"
#include "wprompt/scoring.h"
#include "wprompt/text_normalizer.h"

namespace wprompt {
namespace {

std::vector<std::string> Chars(const std::string& s) {
  std::vector<std::string> out;
  for (char c : s) out.emplace_back(1, c);
  return out;
}

TEST(Normalize, Examples) {
  EXPECT_EQ(Normalize("Hello, World!"), "hello world");
  EXPECT_EQ(Normalize("也 不 需 要"), "也不需要");
  EXPECT_EQ(Normalize("don't stop"), "don't stop");
  EXPECT_EQ(Normalize("  a \t\n b  "), "a b");
  EXPECT_EQ(Normalize("'quoted'"), "quoted");
  EXPECT_EQ(Normalize("你好，世界。"), "你好世界");
  EXPECT_EQ(Normalize("做 research 吧"), "做 research 吧");
  EXPECT_EQ(Normalize(""), "");
}

TEST(Normalize, Profiles) {
  EXPECT_EQ(Normalize("也 不 需 要", NormalizationProfile::kEnglish),
            "也 不 需 要");
  EXPECT_EQ(Normalize("做 research", NormalizationProfile::kMandarin),
            "做research");
  EXPECT_EQ(Normalize("Don't", NormalizationProfile::kEnglish), "don't");
}

TEST(Normalize, Idempotent) {
  for (const char* s : {"Hello, World!", "也 不 需 要 做 Research.",
                        "a -- b", "Ünïcode  Straße", "x'y 'z'"}) {
    std::string once = Normalize(s);
    EXPECT_EQ(Normalize(once), once) << s;
  }
}

TEST(MixedTokenize, Examples) {
  EXPECT_EQ(MixedSurfaces("也不需要做research"),
            (std::vector<std::string>{"也", "不", "需", "要", "做", "research"}));
  auto toks = MixedTokenize("hello world");
  ASSERT_EQ(toks.size(), 2u);
  EXPECT_EQ(toks[0].kind, MixedToken::Kind::kWord);
  EXPECT_TRUE(MixedTokenize("").empty());
  EXPECT_EQ(MixedSurfaces("ab你cd 好"),
            (std::vector<std::string>{"ab", "你", "cd", "好"}));
}

TEST(EditStats, Examples) {
  auto same = ComputeEditStats(Chars("abc"), Chars("abc"));
  EXPECT_EQ(same.errors(), 0);
  EXPECT_EQ(same.ref_len, 3);
  EXPECT_EQ(ComputeEditStats(Chars("kitten"), Chars("sitting")).errors(), 3);
  auto ref = MixedSurfaces(Normalize("也 不 需 要 做 research"));
  auto hyp = MixedSurfaces(Normalize("也 不 需 要 做 研 究"));
  auto s = ComputeEditStats(ref, hyp);
  EXPECT_EQ(s.errors(), 2);
  EXPECT_EQ(s.ref_len, 6);
  EXPECT_NEAR(100.0 * s.rate(), 33.33, 0.01);
}

TEST(EditStats, TieBreakPrefersSubstitution) {
  auto s = ComputeEditStats(Chars("ab"), Chars("ba"));
  EXPECT_EQ(s.substitutions, 2);
  EXPECT_EQ(s.insertions + s.deletions, 0);
  auto d = ComputeEditStats(Chars("a"), {});
  EXPECT_EQ(d.deletions, 1);
  auto i = ComputeEditStats({}, Chars("ab"));
  EXPECT_EQ(i.insertions, 2);
  EXPECT_EQ(i.rate(), 0.0);
}

// Every pair of strings up to length 6 over {a,b,c}.
TEST(EditStats, MatchesShortestPathOracle) {
  testing::EditGraphOracle oracle("abc", 6);
  const auto& all = oracle.strings();
  ASSERT_EQ(all.size(), 1093u);
  std::vector<std::vector<std::string>> toks;
  for (const auto& s : all) toks.push_back(Chars(s));
  for (std::size_t r = 0; r < all.size(); ++r) {
    for (std::size_t h = 0; h < all.size(); ++h) {
      auto st = ComputeEditStats(toks[r], toks[h]);
      ASSERT_EQ(st.errors(), oracle.Distance(r, h)) << all[r] << " / " << all[h];
      ASSERT_EQ(st.deletions - st.insertions,
                static_cast<std::int64_t>(all[r].size()) -
                    static_cast<std::int64_t>(all[h].size()));
      ASSERT_EQ(st.ref_len, static_cast<std::int64_t>(all[r].size()));
    }
  }
}

TEST(ScoreCorpus, CodeSwitchedPair) {
  std::vector<ScoredPair> pairs = {
      {"u1", "也 不 需 要 做 research", "也 不 需 要 做 研 究"}};
  auto rep = ScoreCorpus(pairs, ScoreTask::kCsAsr);
  ASSERT_TRUE(rep.cs_mer && rep.total_mer);
  EXPECT_NEAR(*rep.cs_mer, 100.0 * 2 / 6, 1e-9);
  EXPECT_NEAR(*rep.total_mer, *rep.cs_mer, 1e-12);
  EXPECT_FALSE(rep.zh_cer);
  EXPECT_FALSE(rep.en_wer);
  EXPECT_EQ(rep.utterances[0].cls, UtteranceClass::kCodeSwitched);
}

TEST(ScoreCorpus, ClassesPopulateColumns) {
  std::vector<ScoredPair> pairs = {{"a", "你好世界", "你好世界"},
                                   {"b", "hello world", "hello word"}};
  auto rep = ScoreCorpus(pairs, ScoreTask::kCsAsr);
  ASSERT_TRUE(rep.zh_cer && rep.en_wer);
  EXPECT_EQ(*rep.zh_cer, 0.0);
  EXPECT_EQ(*rep.en_wer, 50.0);
  EXPECT_FALSE(rep.cs_mer);
  EXPECT_EQ(ClassifyReference(""), UtteranceClass::kEnglish);
}

TEST(ScoreCorpus, TotalIsPooledNotAveraged) {
  std::vector<ScoredPair> pairs = {{"a", "one two three four", "one two three four"},
                                   {"b", "x", "y"}};
  auto rep = ScoreCorpus(pairs, ScoreTask::kAsr);
  double mean = 0;
  for (const auto& u : rep.utterances) mean += u.mixed.rate();
  mean = 100.0 * mean / rep.utterances.size();
  EXPECT_NEAR(*rep.total_mer, 20.0, 1e-12);
  EXPECT_NEAR(mean, 50.0, 1e-12);
  EXPECT_EQ(rep.total_stats.ref_len, 5);
}

TEST(ScoreCorpus, EmptyIsError) {
  std::vector<ScoredPair> none;
  EXPECT_THROW(ScoreCorpus(none, ScoreTask::kAsr), ConfigError);
}

TEST(Bleu, Examples) {
  std::vector<std::pair<std::string, std::string>> same = {
      {"the cat sat on the mat", "the cat sat on the mat"}};
  EXPECT_EQ(CorpusBleu(same, BleuTokenization::kWord), 100.0);
  std::vector<std::pair<std::string, std::string>> disjoint = {
      {"the cat sat on the mat", "a dog ran in a park"}};
  EXPECT_EQ(CorpusBleu(disjoint, BleuTokenization::kWord), 0.0);
  std::vector<std::pair<std::string, std::string>> short_hyp = {
      {"the cat sat", "the cat"}};
  EXPECT_EQ(CorpusBleu(short_hyp, BleuTokenization::kWord), 0.0);
  EXPECT_GT(CorpusBleu(short_hyp, BleuTokenization::kWord,
                       BleuSmoothing::kAddOne),
            0.0);
}

TEST(Bleu, CharTokenization) {
  std::vector<std::pair<std::string, std::string>> p = {
      {"我们今天开会讨论", "我们今天开会讨论"}};
  EXPECT_EQ(CorpusBleu(p, BleuTokenization::kChar), 100.0);
  // one word for the whole string under word tokenization
  std::vector<std::pair<std::string, std::string>> q = {
      {"我们今天开会讨论", "我们今天开会讨"}};
  EXPECT_EQ(CorpusBleu(q, BleuTokenization::kWord), 0.0);
  EXPECT_GT(CorpusBleu(q, BleuTokenization::kChar), 0.0);
}

std::string RandomSentence(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {"the", "a",  "cat", "dog",
                                                 "sat", "on", "mat", "ran"};
  std::uniform_int_distribution<int> len(3, 14), w(0, 7);
  std::string s;
  for (int n = len(rng); n > 0; --n) s += (s.empty() ? "" : " ") + words[w(rng)];
  return s;
}

TEST(Bleu, MatchesOracleAndIgnoresOrder) {
  std::mt19937_64 rng(8);
  int nonzero = 0;
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<std::pair<std::string, std::string>> corpus;
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> toks;
    int n = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int i = 0; i < n; ++i) {
      // hypothesis: the reference with a few words dropped or swapped
      std::string ref = RandomSentence(rng);
      auto words = WordTokenize(ref);
      std::string hyp;
      for (const auto& w : words) {
        int roll = std::uniform_int_distribution<int>(0, 9)(rng);
        if (roll == 0) continue;
        hyp += (hyp.empty() ? "" : " ") + (roll == 1 ? std::string("mat") : w);
      }
      corpus.emplace_back(ref, hyp);
      toks.emplace_back(WordTokenize(corpus.back().first),
                        WordTokenize(corpus.back().second));
    }
    double got = CorpusBleu(corpus, BleuTokenization::kWord);
    ASSERT_NEAR(got, testing::OracleBleu(toks), 1e-9);
    nonzero += got > 0;
    std::shuffle(corpus.begin(), corpus.end(), rng);
    ASSERT_NEAR(CorpusBleu(corpus, BleuTokenization::kWord), got, 1e-9);
  }
  EXPECT_GT(nonzero, 150);
}

TEST(ScoreCorpus, StReportsBleu) {
  std::vector<ScoredPair> pairs = {{"a", "我们开会", "我们开会"}};
  auto rep = ScoreCorpus(pairs, ScoreTask::kSt);
  ASSERT_TRUE(rep.corpus_bleu);
  EXPECT_EQ(*rep.corpus_bleu, 100.0);
  EXPECT_NE(rep.ToTable().find("BLEU"), std::string::npos);
}

TEST(EvalReport, JsonAndTable) {
  std::vector<ScoredPair> pairs = {{"b", "hello world", "hello"}};
  auto rep = ScoreCorpus(pairs, ScoreTask::kCsAsr);
  rep.failures.push_back({"c", "boom"});
  auto j = rep.ToJson();
  EXPECT_EQ(j["format"], "wprompt-report");
  EXPECT_EQ(j["version"], kReportFormatVersion);
  EXPECT_EQ(j["task"], "cs_asr");
  EXPECT_EQ(j["metadata"]["normalization"], "norm-v1");
  EXPECT_TRUE(j["metrics"]["zh_cer"].is_null());
  EXPECT_DOUBLE_EQ(j["metrics"]["en_wer"].get<double>(), 50.0);
  EXPECT_EQ(j["failures"].size(), 1u);
  std::string table = rep.ToTable();
  EXPECT_NE(table.find("Total MER"), std::string::npos);
  EXPECT_NE(table.find(" - "), std::string::npos);
  EXPECT_NE(table.find("failures: 1"), std::string::npos);
}

}  // namespace
}  // namespace wprompt
