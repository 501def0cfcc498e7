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

#include "test_support.h"
#include "wprompt/codec.h"
#include "wprompt/errors.h"
#include "wprompt/prompt.h"
#include "wprompt/vocabulary.h"

namespace wprompt {
namespace {

using testing::DataPath;
using testing::TestVocab;

std::string ErrorOf(const std::string& manifest) {
  try {
    Vocabulary::Parse(manifest);
  } catch (const ManifestError& e) {
    return e.what();
  }
  return "";
}

const char* kSmall =
    "vocab_size 8\n"
    "token 0 YQ==\n"
    "token 1 Yg==\n"
    "token 2 Yw==\n"
    "token 3 ZA==\n"
    "token 4 PHN0Pg==\n"
    "token 5 PGVvdD4=\n"
    "token 6 PGVuPg==\n"
    "token 7 PGFzcj4=\n";

TEST(VocabManifest, GoldenFileReadsBackBitExact) {
  const std::string text = ReadFileBytes(DataPath("golden_vocab.manifest"));
  Vocabulary v = Vocabulary::Parse(text);
  EXPECT_EQ(v.size(), 8);
  EXPECT_EQ(v.specials().sot, 4);
  EXPECT_EQ(v.specials().eot, 5);
  EXPECT_EQ(v.specials().sop, 1);
  EXPECT_EQ(v.specials().asr, 3);
  EXPECT_EQ(v.specials().st, 6);
  EXPECT_EQ(v.specials().no_timestamps, 7);
  ASSERT_EQ(v.specials().languages.size(), 1u);
  EXPECT_EQ(v.specials().languages[0], (LanguageCode{"en", 2}));
  EXPECT_EQ(v.token_bytes(0), "a");
  EXPECT_EQ(v.token_bytes(4), "<|startoftranscript|>");
  EXPECT_EQ(v.ToManifest(), text);
}

TEST(VocabManifest, MissingEot) {
  std::string m = std::string(kSmall) +
                  "special sop 0\nspecial sot 4\nspecial asr 7\n"
                  "special st 1\nspecial no_timestamps 2\nspecial lang:en 6\n";
  EXPECT_NE(ErrorOf(m).find("missing special token"), std::string::npos)
      << ErrorOf(m);
}

TEST(VocabManifest, DuplicateId) {
  std::string m =
      "vocab_size 4\ntoken 0 YQ==\ntoken 3 Yg==\ntoken 3 Yw==\ntoken 1 ZA==\n";
  EXPECT_NE(ErrorOf(m).find("duplicate id"), std::string::npos) << ErrorOf(m);
}

TEST(VocabManifest, MalformedInputs) {
  EXPECT_NE(ErrorOf(""), "");
  EXPECT_NE(ErrorOf("vocab_size x\n"), "");
  EXPECT_NE(ErrorOf("vocab_size 1\ntoken 0 !!!\n"), "");
  EXPECT_NE(ErrorOf("vocab_size 1\ntoken 5 YQ==\n"), "");
  EXPECT_NE(ErrorOf("vocab_size 2\ntoken 0 YQ==\n"), "");
  EXPECT_NE(ErrorOf(std::string(kSmall) + "special bogus 3\n"), "");
  EXPECT_NE(ErrorOf(std::string(kSmall) + "special sot 99\n"), "");
  EXPECT_NE(ErrorOf(std::string(kSmall) + "frobnicate 1\n"), "");
}

TEST(VocabManifest, SpecialsShareAnId) {
  std::string m = std::string(kSmall) +
                  "special sop 0\nspecial sot 4\nspecial eot 4\nspecial asr 7\n"
                  "special st 1\nspecial no_timestamps 2\nspecial lang:en 6\n";
  EXPECT_NE(ErrorOf(m), "");
}

TEST(VocabManifest, LoadMissingFile) {
  EXPECT_THROW(LoadVocabManifest("/nonexistent/vocab.manifest"), ManifestError);
}

TEST(TestVocabulary, NinetyNineDistinctLanguages) {
  const auto& sp = TestVocab().specials();
  EXPECT_EQ(sp.languages.size(), 99u);
  std::set<TokenId> ids{sp.sop, sp.sot, sp.eot, sp.asr, sp.st, sp.no_timestamps};
  EXPECT_EQ(ids.size(), 6u);
  for (const auto& l : sp.languages) ids.insert(l.token);
  EXPECT_EQ(ids.size(), 105u);
  EXPECT_TRUE(sp.HasLanguage("zh"));
  EXPECT_TRUE(sp.HasLanguage("haw"));
  EXPECT_FALSE(sp.HasLanguage("xx"));
}

TEST(Tokenizer, RoundTripRandomBytes) {
  const auto& tok = *TestVocab().tokenizer;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> byte(0, 255), len(0, 40);
  for (int iter = 0; iter < 2000; ++iter) {
    std::string s;
    for (int n = len(rng); n > 0; --n) s += static_cast<char>(byte(rng));
    auto ids = tok.Encode(s);
    for (TokenId id : ids) ASSERT_FALSE(tok.IsSpecial(id));
    ASSERT_EQ(tok.Decode(ids), s);
  }
}

TEST(Tokenizer, RoundTripWordsAndScripts) {
  const auto& tok = *TestVocab().tokenizer;
  const std::vector<std::string> pieces = {
      " the", "cat", "你好", "研究", "привет", " мир", "مرحبا", ", ", "research",
      "也不需要做", "<|endoftext|>", "\n", "é", "😀"};
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  for (int iter = 0; iter < 2000; ++iter) {
    std::string s;
    for (int n = iter % 9; n > 0; --n) s += pieces[pick(rng)];
    auto ids = tok.Encode(s);
    for (TokenId id : ids) ASSERT_FALSE(tok.IsSpecial(id));
    ASSERT_EQ(tok.Decode(ids), s);
  }
}

TEST(Tokenizer, LongestMatchPrefersWholeWords) {
  const auto& tok = *TestVocab().tokenizer;
  auto ids = tok.Encode("hello");
  ASSERT_EQ(ids.size(), 1u);
  EXPECT_EQ(tok.TokenBytes(ids[0]), "hello");
  ids = tok.Encode(" research");
  ASSERT_EQ(ids.size(), 1u);
}

TEST(Tokenizer, DecodeSkipsSpecials) {
  const auto& v = TestVocab();
  std::vector<TokenId> ids = v.tokenizer->Encode("hi");
  ids.insert(ids.begin(), v.specials().sot);
  ids.push_back(v.specials().eot);
  EXPECT_EQ(v.tokenizer->Decode(ids), "hi");
}

class PromptGrammar : public ::testing::Test {
 protected:
  const SpecialTokens& sp = TestVocab().specials();
  TokenId Lang(const char* c) { return *sp.LanguageToken(c); }
};

TEST_F(PromptGrammar, SerializeEnglishAsr) {
  PromptSequence p;
  p.languages = {"en"};
  EXPECT_EQ(SerializePrompt(p, sp),
            (std::vector<TokenId>{sp.sot, Lang("en"), sp.asr, sp.no_timestamps}));
}

TEST_F(PromptGrammar, SerializeConcat) {
  PromptSequence p;
  p.languages = {"zh", "en"};
  EXPECT_EQ(SerializePrompt(p, sp),
            (std::vector<TokenId>{sp.sot, Lang("zh"), Lang("en"), sp.asr,
                                  sp.no_timestamps}));
}

TEST_F(PromptGrammar, SerializeWithPreviousText) {
  const auto& tok = *TestVocab().tokenizer;
  PromptSequence p;
  p.previous_text = tok.Encode("spinach, olive oil");
  p.languages = {"en"};
  std::vector<TokenId> expected{sp.sop};
  for (TokenId t : tok.Encode("spinach, olive oil")) expected.push_back(t);
  for (TokenId t : {sp.sot, Lang("en"), sp.asr, sp.no_timestamps}) {
    expected.push_back(t);
  }
  EXPECT_EQ(SerializePrompt(p, sp), expected);
}

TEST_F(PromptGrammar, ParseRussian) {
  std::vector<TokenId> t{sp.sot, Lang("ru"), sp.asr, sp.no_timestamps};
  PromptSequence p = ParsePrompt(t, sp);
  EXPECT_EQ(p.languages, std::vector<std::string>{"ru"});
  EXPECT_EQ(p.task, Task::kAsr);
  EXPECT_TRUE(p.no_timestamps);
  EXPECT_TRUE(p.previous_text.empty());
}

TEST_F(PromptGrammar, MissingLanguageReportsIndexOne) {
  std::vector<TokenId> t{sp.sot, sp.asr};
  try {
    ParsePrompt(t, sp);
    FAIL() << "expected PromptError";
  } catch (const PromptError& e) {
    EXPECT_EQ(e.position(), 1u);
  }
}

TEST_F(PromptGrammar, OffendingPositions) {
  auto pos = [&](std::vector<TokenId> t) -> std::size_t {
    try {
      ParsePrompt(t, sp);
    } catch (const PromptError& e) {
      return e.position();
    }
    return 999;
  };
  EXPECT_EQ(pos({}), 0u);
  EXPECT_EQ(pos({Lang("en")}), 0u);
  EXPECT_EQ(pos({sp.sot, Lang("en"), Lang("zh"), Lang("de"), sp.asr}), 3u);
  EXPECT_EQ(pos({sp.sot, Lang("en"), Lang("en"), sp.asr}), 2u);
  EXPECT_EQ(pos({sp.sot, Lang("en")}), 2u);
  EXPECT_EQ(pos({sp.sot, Lang("en"), sp.asr, sp.no_timestamps, sp.eot}), 4u);
  EXPECT_EQ(pos({sp.sop, sp.sot, Lang("en"), sp.asr}), 1u);
  EXPECT_EQ(pos({sp.sop, 65, 66}), 3u);
}

TEST_F(PromptGrammar, ConcatRoundTrip) {
  PromptSequence p;
  p.languages = {"zh", "en"};
  EXPECT_EQ(ParsePrompt(SerializePrompt(p, sp), sp), p);
}

TEST_F(PromptGrammar, InvalidPromptsRejected) {
  PromptSequence p;
  EXPECT_THROW(SerializePrompt(p, sp), PromptError);
  p.languages = {"en", "en"};
  EXPECT_THROW(SerializePrompt(p, sp), PromptError);
  p.languages = {"en", "zh", "de"};
  EXPECT_THROW(SerializePrompt(p, sp), PromptError);
  p.languages = {"xx"};
  EXPECT_THROW(SerializePrompt(p, sp), PromptError);
  p.languages = {"en"};
  p.previous_text = {sp.eot};
  EXPECT_THROW(SerializePrompt(p, sp), PromptError);
}

TEST_F(PromptGrammar, RandomRoundTripAndInjectivity) {
  std::mt19937_64 rng(2024);
  std::map<std::vector<TokenId>, PromptSequence> seen;
  for (int i = 0; i < 3000; ++i) {
    PromptSequence p = testing::RandomPrompt(rng, TestVocab(), 20);
    auto tokens = SerializePrompt(p, sp);
    ASSERT_EQ(ParsePrompt(tokens, sp), p);
    auto [it, fresh] = seen.emplace(tokens, p);
    if (!fresh) {
      ASSERT_EQ(it->second, p);
    }
  }
}

TEST_F(PromptGrammar, BudgetTruncatesFromTheLeft) {
  PromptSequence p;
  p.languages = {"en"};
  for (int i = 0; i < 300; ++i) p.previous_text.push_back(65 + i % 26);
  EXPECT_THROW(SerializePrompt(p, sp), PromptError);
  PromptSequence fitted = FitToBudget(p);
  auto tokens = SerializePrompt(fitted, sp);
  EXPECT_EQ(tokens.size(), static_cast<std::size_t>(kDefaultPromptBudget));
  // most recent tokens survive
  EXPECT_TRUE(std::equal(fitted.previous_text.rbegin(),
                         fitted.previous_text.rend(), p.previous_text.rbegin()));
  // a prompt that already fits is untouched
  PromptSequence small;
  small.languages = {"zh", "en"};
  small.previous_text = {65, 66};
  EXPECT_EQ(FitToBudget(small), small);
  // no room for text at all drops the sop block
  EXPECT_TRUE(FitToBudget(p, 5).previous_text.empty());
  EXPECT_THROW(FitToBudget(p, 3), PromptError);
}

TEST(RenderTokens, ShowsSpecialNames) {
  const auto& v = TestVocab();
  PromptSequence p;
  p.languages = {"zh", "en"};
  auto t = SerializePrompt(p, v.specials());
  EXPECT_EQ(RenderTokens(t, *v.tokenizer, v.specials()),
            "<|sot|><|zh|><|en|><|asr|><|notimestamps|>");
  EXPECT_EQ(RenderTokens(t, *v.tokenizer, v.specials(), false),
            "<|sot|><|zh|><|en|><|asr|>");
}

}  // namespace
}  // namespace wprompt
