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

#include <thread>

#include "test_support.h"
#include "wprompt/backend_factory.h"
#include "wprompt/decoder.h"
#include "wprompt/errors.h"
#include "wprompt/external_backend.h"
#include "wprompt/protocol.h"

namespace wprompt {
namespace {

using nlohmann::json;
using testing::DataPath;
using testing::TestVocab;

std::vector<std::string> EngineArgv() {
  return {WPROMPT_ECHO_ENGINE, "--vocab", DataPath("test_vocab.manifest")};
}

void ExpectConformant(LineTransport& t) {
  auto checks = testing::RunConformance(t, TestVocab());
  EXPECT_GE(checks.size(), 19u);
  for (const auto& c : checks) EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;
}

TEST(Protocol, StdioConformance) {
  auto t = SubprocessTransport::Spawn(EngineArgv(), 10000);
  ExpectConformant(*t);
}

TEST(Protocol, TcpConformance) {
  testing::TcpEchoEngine engine(DataPath("test_vocab.manifest"));
  auto t = TcpTransport::Connect("127.0.0.1", engine.port(), 10000);
  ExpectConformant(*t);
  // a second connection is served independently
  auto t2 = TcpTransport::Connect("127.0.0.1", engine.port(), 10000);
  ExpectConformant(*t2);
}

PromptSequence EnPrompt() {
  PromptSequence p;
  p.languages = {"en"};
  return p;
}

TEST(Protocol, DecodingThroughEchoEngine) {
  const auto& v = TestVocab();
  for (const char* spec : {"exec", "tcp"}) {
    std::optional<testing::TcpEchoEngine> tcp;
    std::shared_ptr<Backend> backend;
    if (std::string(spec) == "tcp") {
      tcp.emplace(DataPath("test_vocab.manifest"));
      backend = MakeBackend(
          BackendSpec::Parse("tcp:127.0.0.1:" + std::to_string(tcp->port())), v);
    } else {
      backend = MakeBackend(
          BackendSpec::Parse(std::string("exec:") + WPROMPT_ECHO_ENGINE +
                             " --vocab " + DataPath("test_vocab.manifest")),
          v);
    }
    Decoder dec(*backend, *v.tokenizer, v.specials());
    for (const char* text : {"hello world", "我们今天开会 meeting", "привет"}) {
      EXPECT_EQ(dec.Decode({text}, EnPrompt(), {}).text, text) << spec;
    }
    std::vector<std::string> pair{"zh", "en"};
    auto lid = dec.RunLid({"x"}, pair);
    EXPECT_NEAR(lid.confidence, 0.5, 1e-9);
  }
}

TEST(Protocol, ConcurrentStepsOverOneConnection) {
  const auto& v = TestVocab();
  auto backend = std::make_shared<GuardedBackend>(MakeBackend(
      BackendSpec::Parse(std::string("exec:") + WPROMPT_ECHO_ENGINE +
                         " --vocab " + DataPath("test_vocab.manifest")),
      v));
  std::vector<std::thread> threads;
  std::atomic<int> wrong{0};
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&, i] {
      Decoder dec(*backend, *v.tokenizer, v.specials());
      std::string text = "cat " + std::to_string(i);
      for (int k = 0; k < 5; ++k) {
        if (dec.Decode({text}, EnPrompt(), {}).text != text) ++wrong;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(wrong.load(), 0);
}

TEST(Protocol, EngineErrorBecomesBackendError) {
  const auto& v = TestVocab();
  auto backend = MakeBackend(
      BackendSpec::Parse(std::string("exec:") + WPROMPT_ECHO_ENGINE +
                         " --vocab " + DataPath("test_vocab.manifest")),
      v);
  std::vector<TokenId> no_sot = {0, 1};
  EXPECT_THROW(backend->Step({"a"}, no_sot), BackendError);
  // still usable afterwards
  std::vector<TokenId> ctx = {v.specials().sot};
  EXPECT_EQ(backend->Step({"a"}, ctx).size(),
            static_cast<std::size_t>(v.vocab->size()));
}

TEST(Protocol, DeadEngine) {
  const auto& v = TestVocab();
  EXPECT_THROW(MakeBackend(BackendSpec::Parse("exec:/bin/false"), v)->Info(),
               BackendError);
  EXPECT_THROW(MakeBackend(BackendSpec::Parse("tcp:127.0.0.1:1"), v)->Info(),
               BackendError);
}

TEST(Protocol, ClientSideParsing) {
  EXPECT_THROW(ParseStepResponse(json{{"v", 1}, {"error", "nope"}}), BackendError);
  EXPECT_THROW(ParseStepResponse(json{{"v", 2}, {"logits", {1.0}}}), BackendError);
  EXPECT_THROW(ParseStepResponse(json{{"v", 1}, {"logits", {"x"}}}), BackendError);
  EXPECT_THROW(ParseInfoResponse(json{{"v", 1}, {"vocab_size", 0},
                                      {"languages", json::array()}}),
               BackendError);
  auto logits = ParseStepResponse(json{{"v", 1}, {"logits", {1.5, -2.0}}});
  EXPECT_EQ(logits, (std::vector<float>{1.5f, -2.0f}));
  auto req = MakeStepRequest({"a"}, std::vector<TokenId>{3, 4});
  EXPECT_EQ(req.dump(), R"({"audio":"a","context":[3,4],"op":"step","v":1})");
}

TEST(Protocol, BackendSpecParsing) {
  auto e = BackendSpec::Parse("exec:engine  --flag two");
  EXPECT_EQ(e.kind, BackendSpec::Kind::kExec);
  EXPECT_EQ(e.argv, (std::vector<std::string>{"engine", "--flag", "two"}));
  auto t = BackendSpec::Parse("tcp:localhost:9000");
  EXPECT_EQ(t.port, 9000);
  EXPECT_EQ(t.host, "localhost");
  auto m = BackendSpec::Parse("mock:s.json", "/d");
  EXPECT_EQ(m.mock_script, "/d/s.json");
  EXPECT_THROW(BackendSpec::Parse("tcp:host"), Error);
  EXPECT_THROW(BackendSpec::Parse("exec:"), Error);
  EXPECT_THROW(BackendSpec::Parse("smoke-signals"), Error);
}

}  // namespace
}  // namespace wprompt
