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

#include "test_support.h"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "wprompt/protocol.h"

namespace wprompt::testing {

namespace fs = std::filesystem;

std::string DataPath(const std::string& rel) {
  return (fs::path(WPROMPT_DATA_DIR) / rel).string();
}

const LoadedVocabulary& TestVocab() {
  static const LoadedVocabulary vocab =
      LoadVocabManifest(DataPath("test_vocab.manifest"));
  return vocab;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("wprompt-test-" + std::to_string(rd()) + "-" +
           std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void WriteFile(const std::string& path, const std::string& text) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

int RunCommand(const std::string& cmd) {
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128;
}

RandomBackend::RandomBackend(std::uint64_t seed, const LoadedVocabulary& vocab)
    : seed_(seed), eot_(vocab.specials().eot) {
  info_.vocab_size = vocab.vocab->size();
  for (const auto& l : vocab.specials().languages) info_.languages.push_back(l.code);
  info_.concurrent_steps = false;
}

BackendInfo RandomBackend::Info() { return info_; }

std::vector<float> RandomBackend::Step(const AudioHandle& audio,
                                       std::span<const TokenId> context) {
  ++calls_;
  // FNV-1a over everything that identifies the step
  std::uint64_t h = 1469598103934665603ull ^ seed_;
  auto mix = [&](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  for (unsigned char c : audio.ref) mix(c);
  for (TokenId t : context) mix(static_cast<std::uint64_t>(t) + 7);
  std::mt19937_64 rng(h);
  std::uniform_int_distribution<int> q(-10, 10);
  std::vector<float> logits(static_cast<std::size_t>(info_.vocab_size));
  for (auto& x : logits) x = 0.5f * static_cast<float>(q(rng));
  // keep sequences going for a while, eot wins sometimes
  logits[eot_] = 0.5f * static_cast<float>(q(rng)) - 1.0f;
  return logits;
}

PromptSequence RandomPrompt(std::mt19937_64& rng, const LoadedVocabulary& vocab,
                            int max_previous) {
  const auto& sp = vocab.specials();
  PromptSequence p;
  std::uniform_int_distribution<int> prev_len(0, max_previous);
  std::uniform_int_distribution<int> any(0, vocab.vocab->size() - 1);
  int n = std::bernoulli_distribution(0.5)(rng) ? prev_len(rng) : 0;
  while (static_cast<int>(p.previous_text.size()) < n) {
    TokenId t = any(rng);
    if (!sp.IsSpecial(t)) p.previous_text.push_back(t);
  }
  std::uniform_int_distribution<std::size_t> lang(0, sp.languages.size() - 1);
  p.languages.push_back(sp.languages[lang(rng)].code);
  if (std::bernoulli_distribution(0.5)(rng)) {
    std::string second;
    do {
      second = sp.languages[lang(rng)].code;
    } while (second == p.languages[0]);
    p.languages.push_back(second);
  }
  p.task = std::bernoulli_distribution(0.5)(rng) ? Task::kAsr : Task::kSt;
  p.no_timestamps = std::bernoulli_distribution(0.8)(rng);
  return p;
}

namespace {

using nlohmann::json;

bool IsStructuredError(const std::string& line, std::string* detail) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception&) {
    *detail = "reply is not JSON: " + line;
    return false;
  }
  if (!j.is_object() || j.value("v", 0) != 1 || !j.contains("error") ||
      !j["error"].is_string() || j["error"].get<std::string>().empty()) {
    *detail = "not a v1 error: " + line;
    return false;
  }
  return true;
}

}  // namespace

std::vector<ConformanceCheck> RunConformance(LineTransport& t,
                                             const LoadedVocabulary& vocab) {
  std::vector<ConformanceCheck> out;
  auto run = [&](const std::string& name, auto&& body) {
    ConformanceCheck c{name};
    try {
      c.ok = body(c.detail);
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    out.push_back(std::move(c));
  };
  auto info_ok = [&](std::string& detail) {
    t.WriteLine(MakeInfoRequest().dump());
    BackendInfo info = ParseInfoResponse(json::parse(t.ReadLine()));
    if (info.vocab_size != vocab.vocab->size()) {
      detail = "vocab_size " + std::to_string(info.vocab_size);
      return false;
    }
    if (info.languages.size() != vocab.specials().languages.size()) {
      detail = "languages " + std::to_string(info.languages.size());
      return false;
    }
    return true;
  };
  run("info", info_ok);
  run("step", [&](std::string& detail) {
    std::vector<TokenId> ctx = {vocab.specials().sot};
    t.WriteLine(MakeStepRequest({"hello"}, ctx).dump());
    auto logits = ParseStepResponse(json::parse(t.ReadLine()));
    if (static_cast<int>(logits.size()) != vocab.vocab->size()) {
      detail = "got " + std::to_string(logits.size()) + " logits";
      return false;
    }
    return true;
  });
  const std::vector<std::pair<std::string, std::string>> malformed = {
      {"not json", "hello engine"},
      {"truncated json", R"({"v":1,"op":"info")"},
      {"array body", "[1,2,3]"},
      {"missing version", R"({"op":"info"})"},
      {"wrong version", R"({"v":2,"op":"info"})"},
      {"string version", R"({"v":"1","op":"info"})"},
      {"missing op", R"({"v":1})"},
      {"unknown op", R"({"v":1,"op":"dance"})"},
      {"step without audio", R"({"v":1,"op":"step","context":[0]})"},
      {"step with empty audio", R"({"v":1,"op":"step","audio":"","context":[0]})"},
      {"step without context", R"({"v":1,"op":"step","audio":"a"})"},
      {"context not array", R"({"v":1,"op":"step","audio":"a","context":5})"},
      {"context with string", R"({"v":1,"op":"step","audio":"a","context":["x"]})"},
      {"negative token", R"({"v":1,"op":"step","audio":"a","context":[-1]})"},
      {"token past vocab", R"({"v":1,"op":"step","audio":"a","context":[99999999]})"},
      {"context without sot", R"({"v":1,"op":"step","audio":"a","context":[]})"},
      {"invalid utf-8", "{\"v\":1,\"op\":\"\xff\xfe\"}"},
  };
  for (const auto& [name, line] : malformed) {
    run("malformed: " + name, [&](std::string& detail) {
      t.WriteLine(line);
      return IsStructuredError(t.ReadLine(), &detail);
    });
  }
  run("info after malformed", info_ok);
  return out;
}

TcpEchoEngine::TcpEchoEngine(const std::string& vocab_path) {
  int fds[2];
  if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
  pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    dup2(fds[1], 1);
    close(fds[0]);
    close(fds[1]);
    execl(WPROMPT_ECHO_ENGINE, WPROMPT_ECHO_ENGINE, "--vocab",
          vocab_path.c_str(), "--tcp", "0", static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  pid_ = pid;
  std::string line;
  char c;
  while (read(fds[0], &c, 1) == 1 && c != '\n') line += c;
  close(fds[0]);
  if (std::sscanf(line.c_str(), "listening %d", &port_) != 1) {
    kill(pid_, SIGKILL);
    waitpid(pid_, nullptr, 0);
    throw std::runtime_error("echo engine did not start: " + line);
  }
}

TcpEchoEngine::~TcpEchoEngine() {
  if (pid_ > 0) {
    kill(pid_, SIGTERM);
    waitpid(pid_, nullptr, 0);
  }
}

}  // namespace wprompt::testing
