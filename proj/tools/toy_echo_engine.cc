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

// Reference engine for the line protocol. The audio string is taken as the
// transcript: at each position the matching token gets logit 0, everything
// else -10. LID is uniform.
//
//   toy_echo_engine --vocab v.manifest            # stdio
//   toy_echo_engine --vocab v.manifest --tcp 0    # prints "listening <port>"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <csignal>
#include <cstdio>
#include <mutex>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "wprompt/backend.h"
#include "wprompt/errors.h"
#include "wprompt/protocol.h"
#include "wprompt/vocabulary.h"

namespace {

using wprompt::AudioHandle;
using wprompt::TokenId;

class EchoBackend : public wprompt::Backend {
 public:
  explicit EchoBackend(wprompt::LoadedVocabulary vocab)
      : vocab_(std::move(vocab)) {}

  wprompt::BackendInfo Info() override {
    wprompt::BackendInfo info;
    info.vocab_size = vocab_.vocab->size();
    for (const auto& l : vocab_.specials().languages) {
      info.languages.push_back(l.code);
    }
    return info;
  }

  std::vector<float> Step(const AudioHandle& audio,
                          std::span<const TokenId> context) override {
    const auto& sp = vocab_.specials();
    std::vector<float> logits(vocab_.vocab->size(), -10.0f);
    std::size_t i = 0;
    while (i < context.size() && context[i] != sp.sot) ++i;
    if (i == context.size()) throw wprompt::BackendError("context lacks sot");
    ++i;
    if (i == context.size()) {
      for (const auto& l : sp.languages) logits[l.token] = 0.0f;
      return logits;
    }
    while (i < context.size() && sp.LanguageOf(context[i])) ++i;
    if (i < context.size() && (context[i] == sp.asr || context[i] == sp.st)) ++i;
    if (i < context.size() && context[i] == sp.no_timestamps) ++i;
    const std::size_t position = context.size() - i;
    auto target = vocab_.tokenizer->Encode(audio.ref);
    logits[position < target.size() ? target[position] : sp.eot] = 0.0f;
    return logits;
  }

 private:
  wprompt::LoadedVocabulary vocab_;
};

// protocol v1 does not promise concurrent steps, so TCP clients share a lock
class Locked : public wprompt::Backend {
 public:
  explicit Locked(wprompt::Backend* b) : b_(b) {}
  wprompt::BackendInfo Info() override {
    std::lock_guard lock(mu_);
    return b_->Info();
  }
  std::vector<float> Step(const AudioHandle& a,
                          std::span<const TokenId> c) override {
    std::lock_guard lock(mu_);
    return b_->Step(a, c);
  }

 private:
  wprompt::Backend* b_;
  std::mutex mu_;
};

void ServeStream(FILE* in, FILE* out, wprompt::Backend& engine) {
  char* buf = nullptr;
  size_t cap = 0;
  ssize_t n;
  while ((n = getline(&buf, &cap, in)) >= 0) {
    std::string line(buf, static_cast<size_t>(n));
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    std::string reply = wprompt::ServeRequestLine(line, engine);
    reply += '\n';
    if (fwrite(reply.data(), 1, reply.size(), out) != reply.size()) break;
    fflush(out);
  }
  free(buf);
}

int ServeTcp(int port, wprompt::Backend& engine) {
  int fd = socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) return 1;
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      listen(fd, 16) != 0) {
    perror("toy_echo_engine");
    return 1;
  }
  socklen_t len = sizeof(addr);
  getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  std::printf("listening %d\n", ntohs(addr.sin_port));
  std::fflush(stdout);
  for (;;) {
    int conn = accept(fd, nullptr, nullptr);
    if (conn < 0) continue;
    std::thread([conn, &engine] {
      int dup_fd = dup(conn);
      FILE* in = fdopen(conn, "r");
      FILE* out = fdopen(dup_fd, "w");
      if (in && out) ServeStream(in, out, engine);
      if (in) fclose(in);
      if (out) fclose(out);
    }).detach();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toy echo engine (protocol v1)"};
  std::string vocab_path;
  int tcp_port = -1;
  app.add_option("--vocab", vocab_path, "vocabulary manifest")->required();
  app.add_option("--tcp", tcp_port, "serve on 127.0.0.1:PORT (0 = any)");
  CLI11_PARSE(app, argc, argv);

  std::signal(SIGPIPE, SIG_IGN);
  try {
    EchoBackend echo(wprompt::LoadVocabManifest(vocab_path));
    Locked engine(&echo);
    if (tcp_port >= 0) return ServeTcp(tcp_port, engine);
    ServeStream(stdin, stdout, engine);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "toy_echo_engine: %s\n", e.what());
    return 2;
  }
  return 0;
}
