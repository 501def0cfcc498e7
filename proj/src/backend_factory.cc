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

#include "wprompt/backend_factory.h"

#include <filesystem>
#include <sstream>

#include "wprompt/codec.h"
#include "wprompt/errors.h"
#include "wprompt/external_backend.h"
#include "wprompt/mock_backend.h"

namespace wprompt {

BackendSpec BackendSpec::Parse(std::string_view spec,
                               const std::string& base_dir) {
  BackendSpec out;
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("backend spec must look like kind:value, got '" +
                      std::string(spec) + "'");
  }
  std::string_view kind = spec.substr(0, colon);
  std::string value(spec.substr(colon + 1));
  if (value.empty()) throw ConfigError("empty backend spec value");
  if (kind == "mock") {
    out.kind = Kind::kMock;
    std::filesystem::path p(value);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    out.mock_script = p.lexically_normal().string();
  } else if (kind == "exec") {
    out.kind = Kind::kExec;
    std::istringstream in(value);
    for (std::string arg; in >> arg;) out.argv.push_back(arg);
  } else if (kind == "tcp") {
    out.kind = Kind::kTcp;
    auto pc = value.rfind(':');
    if (pc == std::string::npos || pc == 0) {
      throw ConfigError("tcp backend spec needs host:port");
    }
    out.host = value.substr(0, pc);
    try {
      std::size_t used = 0;
      out.port = std::stoi(value.substr(pc + 1), &used);
      if (used != value.size() - pc - 1) throw std::invalid_argument("port");
    } catch (const std::logic_error&) {
      throw ConfigError("tcp backend spec has an invalid port");
    }
    if (out.port <= 0 || out.port > 65535) {
      throw ConfigError("tcp backend port out of range");
    }
  } else {
    throw ConfigError("unknown backend kind: " + std::string(kind));
  }
  return out;
}

std::string BackendSpec::ToString() const {
  switch (kind) {
    case Kind::kMock:
      return "mock:" + mock_script;
    case Kind::kExec: {
      std::string s = "exec:";
      for (std::size_t i = 0; i < argv.size(); ++i) s += (i ? " " : "") + argv[i];
      return s;
    }
    case Kind::kTcp:
      return "tcp:" + host + ":" + std::to_string(port);
  }
  return {};
}

std::string BackendSpec::Digest() const {
  if (kind == Kind::kMock) return "mock:" + Sha256File(mock_script);
  return ToString();
}

std::shared_ptr<Backend> MakeBackend(const BackendSpec& spec,
                                     const LoadedVocabulary& vocab) {
  switch (spec.kind) {
    case BackendSpec::Kind::kMock:
      return std::make_shared<MockBackend>(MockScript::Load(spec.mock_script),
                                           vocab.tokenizer, vocab.specials());
    case BackendSpec::Kind::kExec:
      return std::make_shared<ExternalBackend>(
          SubprocessTransport::Spawn(spec.argv));
    case BackendSpec::Kind::kTcp:
      return std::make_shared<ExternalBackend>(
          TcpTransport::Connect(spec.host, spec.port));
  }
  throw ConfigError("unknown backend kind");
}

}  // namespace wprompt
