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

#include <random>
#include <set>

#include "oracles.h"
#include "test_support.h"
#include "wprompt/decoder.h"
#include "wprompt/errors.h"
#include "wprompt/vocab_mask.h"

namespace wprompt {
namespace {

using testing::TestVocab;

// Plain tokens take ids 0..n-1, specials follow.
LoadedVocabulary Toy(const std::vector<std::string>& plain) {
  std::vector<std::string> bytes = plain;
  std::vector<Vocabulary::SpecialEntry> specials;
  for (const char* name : {"eot", "sot", "sop", "asr", "st", "no_timestamps",
                           "lang:en", "lang:zh", "lang:ru"}) {
    specials.push_back({name, static_cast<TokenId>(bytes.size())});
    bytes.push_back(std::string("<|") + name + "|>");
  }
  return MakeLoadedVocabulary(Vocabulary(bytes, specials));
}

std::set<std::string> AllowedSurfaces(const VocabMask& m,
                                      const LoadedVocabulary& v) {
  std::set<std::string> out;
  for (TokenId id : m.AllowedTokens()) {
    out.insert(id == v.specials().eot ? "<eot>" : v.tokenizer->TokenBytes(id));
  }
  return out;
}

TEST(ScriptMask, CyrillicExample) {
  auto v = Toy({"привет", "hello", ", "});
  auto m = BuildScriptMask(CyrillicScript(), *v.tokenizer, v.specials());
  EXPECT_EQ(AllowedSurfaces(m, v),
            (std::set<std::string>{"привет", ", ", "<eot>"}));
}

TEST(ScriptMask, CjkExample) {
  auto v = Toy({"你好", "the", "。"});
  auto m = BuildScriptMask(CjkScript(), *v.tokenizer, v.specials());
  EXPECT_EQ(AllowedSurfaces(m, v), (std::set<std::string>{"你好", "。", "<eot>"}));
}

TEST(ScriptMask, EmptyRangesKeepOnlyNeutralTokens) {
  auto v = Toy({"abc", "123", " ", "?!", "ж", "\xE4\xBD"});
  auto m = BuildScriptMask(ScriptSpec::Make("none", {}), *v.tokenizer,
                           v.specials());
  EXPECT_EQ(AllowedSurfaces(m, v),
            (std::set<std::string>{"123", " ", "?!", "<eot>"}));
}

TEST(ScriptMask, PartialUtf8Disallowed) {
  EXPECT_FALSE(TokenFitsScript("\xD0", CyrillicScript()));
  EXPECT_FALSE(TokenFitsScript("\xE4\xBD", CjkScript()));
  EXPECT_TRUE(TokenFitsScript("\xD0\xB6", CyrillicScript()));
}

TEST(ScriptMask, CombiningMarksCountAsLetters) {
  // U+0301 lies outside the Cyrillic blocks
  EXPECT_FALSE(TokenFitsScript("\xD0\xB0\xCC\x81", CyrillicScript()));
  // U+0483 lies inside
  EXPECT_TRUE(TokenFitsScript("\xD0\xB0\xD2\x83", CyrillicScript()));
}

TEST(ScriptMask, ShippedRangesMatchCharts) {
  EXPECT_EQ(CjkScript().ranges, testing::OracleCjkRanges());
  EXPECT_EQ(CyrillicScript().ranges, testing::OracleCyrillicRanges());
  EXPECT_EQ(ArabicScript().ranges, testing::OracleArabicRanges());
  EXPECT_EQ(NamedScript("cyrillic")->name, "cyrillic");
  EXPECT_FALSE(NamedScript("klingon").has_value());
}

TEST(ScriptMask, SpecialsOtherThanEotNeverAllowed) {
  const auto& v = TestVocab();
  for (const ScriptSpec* s : {&CjkScript(), &CyrillicScript(), &ArabicScript()}) {
    auto m = BuildScriptMask(*s, *v.tokenizer, v.specials());
    for (TokenId id = 0; id < v.vocab->size(); ++id) {
      if (v.vocab->IsSpecial(id)) {
        ASSERT_EQ(m.allowed(id), id == v.specials().eot) << id;
      }
    }
  }
}

void CheckAgainstOracle(const ScriptSpec& spec, const testing::Ranges& ranges,
                        std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::set<std::string> unique;
  while (static_cast<int>(unique.size()) < count) {
    unique.insert(testing::RandomTokenBytes(rng, ranges));
  }
  std::vector<std::string> plain(unique.begin(), unique.end());
  auto v = Toy(plain);
  auto mask = BuildScriptMask(spec, *v.tokenizer, v.specials());
  int allowed = 0;
  for (TokenId id = 0; id < static_cast<TokenId>(plain.size()); ++id) {
    bool want = testing::OracleScriptAllows(plain[id], ranges);
    allowed += want;
    ASSERT_EQ(mask.allowed(id), want) << spec.name << " token " << id;
    ASSERT_EQ(TokenFitsScript(plain[id], spec), want);
  }
  // both outcomes must actually occur
  EXPECT_GT(allowed, count / 20);
  EXPECT_LT(allowed, count - count / 20);
}

TEST(ScriptMask, AgreesWithOracleCjk) {
  CheckAgainstOracle(CjkScript(), testing::OracleCjkRanges(), 1, 3000);
}
TEST(ScriptMask, AgreesWithOracleCyrillic) {
  CheckAgainstOracle(CyrillicScript(), testing::OracleCyrillicRanges(), 2, 3000);
}
TEST(ScriptMask, AgreesWithOracleArabic) {
  CheckAgainstOracle(ArabicScript(), testing::OracleArabicRanges(), 3, 3000);
}

TEST(ScriptSpec, Validation) {
  EXPECT_THROW(ScriptSpec::Make("x", {{0x20, 0x10}}), ConfigError);
  EXPECT_THROW(ScriptSpec::Make("x", {{0x10, 0x20}, {0x15, 0x30}}), ConfigError);
  auto s = ScriptSpec::Make("x", {{0x30, 0x40}, {0x10, 0x20}});
  EXPECT_EQ(s.ranges.front().first, 0x10u);
  EXPECT_TRUE(s.Contains(0x35));
  EXPECT_FALSE(s.Contains(0x25));
}

TEST(ScriptSpec, ConfigFile) {
  auto specs = ParseScriptConfig(
      "# greek and coptic\n"
      "script greek\n"
      "range 0370 03FF\n"
      "range 1F00 1FFF\n"
      "\n"
      "script hebrew\n"
      "range 0590 05FF\n");
  ASSERT_EQ(specs.size(), 2u);
  EXPECT_EQ(specs[0].name, "greek");
  EXPECT_EQ(specs[0].ranges.size(), 2u);
  EXPECT_TRUE(specs[1].Contains(0x05D0));
  EXPECT_THROW(ParseScriptConfig("range 0370 03FF\n"), ConfigError);
  EXPECT_THROW(ParseScriptConfig("script a\nrange zz 10\n"), ConfigError);
  EXPECT_THROW(ParseScriptConfig("script a\nrange 10\n"), ConfigError);
  EXPECT_THROW(ParseScriptConfig("script a\nscript a\n"), ConfigError);
}

TEST(FrequencyMask, CountingExample) {
  auto v = Toy({"a", "b", "c", "d", " "});
  FrequencyMaskConfig cfg{50.0, "a a a b b c"};
  auto m = BuildFrequencyMask(cfg, *v.tokenizer, v.specials());
  auto got = AllowedSurfaces(m, v);
  got.erase(" ");
  EXPECT_EQ(got, (std::set<std::string>{"a", "b", "<eot>"}));
  cfg.percent = 100.0;
  got = AllowedSurfaces(BuildFrequencyMask(cfg, *v.tokenizer, v.specials()), v);
  got.erase(" ");
  EXPECT_EQ(got, (std::set<std::string>{"a", "b", "c", "<eot>"}));
}

TEST(FrequencyMask, TiesBrokenByLowerId) {
  auto v = Toy({"a", "b", "c", " "});
  FrequencyMaskConfig cfg{34.0, "c b a"};
  auto got = AllowedSurfaces(BuildFrequencyMask(cfg, *v.tokenizer, v.specials()), v);
  got.erase(" ");
  // 34% of 3 types rounds up to 2
  EXPECT_EQ(got, (std::set<std::string>{"a", "b", "<eot>"}));
}

TEST(FrequencyMask, Defaults) {
  EXPECT_EQ(DefaultFrequencyPercent("de"), 40.0);
  EXPECT_EQ(DefaultFrequencyPercent("fr"), 50.0);
  EXPECT_FALSE(DefaultFrequencyPercent("ru").has_value());
}

TEST(FrequencyMask, Errors) {
  auto v = Toy({"a", " "});
  EXPECT_THROW(BuildFrequencyMask({50.0, ""}, *v.tokenizer, v.specials()),
               ConfigError);
  EXPECT_THROW(BuildFrequencyMask({0.0, "a"}, *v.tokenizer, v.specials()),
               ConfigError);
  EXPECT_THROW(BuildFrequencyMask({100.5, "a"}, *v.tokenizer, v.specials()),
               ConfigError);
}

std::string RandomCorpus(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {
      "the", "cat", "sat", "on", "mat", "hello", "world", "你好", "研究", "я",
      "люблю", "кофе", "xyz", "q", "data", "model", "!", "42", "é"};
  // skewed word distribution so counts differ
  std::geometric_distribution<std::size_t> pick(0.25);
  std::uniform_int_distribution<int> len(1, 60);
  std::string s;
  for (int n = len(rng); n > 0; --n) {
    s += words[std::min(pick(rng), words.size() - 1)];
    s += std::bernoulli_distribution(0.8)(rng) ? " " : "";
  }
  return s;
}

TEST(FrequencyMask, AgreesWithCountingOracle) {
  const auto& v = TestVocab();
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 300; ++iter) {
    std::string corpus = RandomCorpus(rng);
    int percent = std::uniform_int_distribution<int>(1, 100)(rng);
    auto mask = BuildFrequencyMask({double(percent), corpus}, *v.tokenizer,
                                   v.specials());
    std::vector<TokenId> words;
    std::set<TokenId> blanks;
    for (TokenId id : v.tokenizer->Encode(corpus)) {
      if (v.tokenizer->TokenBytes(id).find_first_not_of(" ") == std::string::npos) {
        blanks.insert(id);
      } else {
        words.push_back(id);
      }
    }
    auto want = testing::OracleFrequencyAllowed(words, percent);
    for (TokenId id : v.tokenizer->Encode(corpus)) {
      if (blanks.count(id)) continue;
      ASSERT_EQ(mask.allowed(id), want.count(id) > 0) << corpus << " @" << percent;
    }
    ASSERT_TRUE(mask.allowed(v.specials().eot));
  }
}

TEST(FrequencyMask, MonotoneInPercent) {
  const auto& v = TestVocab();
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 50; ++iter) {
    std::string corpus = RandomCorpus(rng);
    std::vector<VocabMask> masks;
    for (int p = 5; p <= 100; p += 5) {
      masks.push_back(
          BuildFrequencyMask({double(p), corpus}, *v.tokenizer, v.specials()));
    }
    for (std::size_t i = 0; i < masks.size(); ++i) {
      for (std::size_t j = i + 1; j < masks.size(); ++j) {
        for (TokenId id : masks[i].AllowedTokens()) {
          ASSERT_TRUE(masks[j].allowed(id));
        }
      }
    }
  }
}

TEST(RestrictLanguages, Examples) {
  const auto& v = TestVocab();
  const auto& sp = v.specials();
  std::vector<std::string> two{"zh", "en"};
  auto m = RestrictLanguages(two, v.vocab->size(), sp);
  int langs = 0;
  for (const auto& l : sp.languages) langs += m.allowed(l.token);
  EXPECT_EQ(langs, 2);
  EXPECT_TRUE(m.allowed(*sp.LanguageToken("zh")));
  std::vector<std::string> all;
  for (const auto& l : sp.languages) all.push_back(l.code);
  auto full = RestrictLanguages(all, v.vocab->size(), sp);
  for (const auto& l : sp.languages) EXPECT_TRUE(full.allowed(l.token));
  std::vector<std::string> none;
  EXPECT_THROW(RestrictLanguages(none, v.vocab->size(), sp), ConfigError);
  std::vector<std::string> bad{"xx"};
  EXPECT_THROW(RestrictLanguages(bad, v.vocab->size(), sp), ConfigError);
}

TEST(Intersect, Examples) {
  const auto& v = TestVocab();
  const auto& sp = v.specials();
  auto cyr = BuildScriptMask(CyrillicScript(), *v.tokenizer, sp);
  auto full = FullTextMask(*v.tokenizer, sp);
  EXPECT_EQ(Intersect(cyr, full), cyr);
  auto freq = BuildFrequencyMask({60.0, "я люблю кофе кофе the cat"},
                                 *v.tokenizer, sp);
  auto both = Intersect(cyr, freq);
  for (TokenId id = 0; id < v.vocab->size(); ++id) {
    ASSERT_EQ(both.allowed(id), cyr.allowed(id) && freq.allowed(id));
  }
  VocabMask a(v.vocab->size(), sp.eot, "a"), b(v.vocab->size(), sp.eot, "b");
  a.Allow(65);
  b.Allow(66);
  EXPECT_EQ(Intersect(a, b).AllowedTokens(), std::vector<TokenId>{sp.eot});
  VocabMask small(10, 0, "small");
  EXPECT_THROW(Intersect(a, small), ConfigError);
}

TEST(VocabMask, EotAlwaysAllowed) {
  VocabMask m(100, 42, "x");
  EXPECT_TRUE(m.allowed(42));
  m.Disallow(42);
  EXPECT_TRUE(m.allowed(42));
  EXPECT_EQ(m.CountAllowed(), 1);
  EXPECT_FALSE(m.allowed(-1));
  EXPECT_FALSE(m.allowed(100));
}

TEST(VocabMask, TextRoundTrip) {
  const auto& v = TestVocab();
  auto m = BuildScriptMask(CjkScript(), *v.tokenizer, v.specials());
  std::string text = m.ToText();
  EXPECT_EQ(text.rfind("vocab_mask v1 size ", 0), 0u);
  VocabMask back = VocabMask::FromText(text);
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.description(), m.description());
  EXPECT_THROW(VocabMask::FromText("nonsense"), Error);
}

TEST(VocabMask, ApplyDoesNotMutate) {
  const auto& v = TestVocab();
  auto m = BuildScriptMask(CyrillicScript(), *v.tokenizer, v.specials());
  VocabMask copy = m;
  std::vector<float> logits(v.vocab->size(), 1.0f);
  ApplyMask(logits, m);
  EXPECT_EQ(m, copy);
  for (TokenId id = 0; id < v.vocab->size(); ++id) {
    EXPECT_EQ(logits[id] == 1.0f, m.allowed(id));
  }
}

}  // namespace
}  // namespace wprompt
