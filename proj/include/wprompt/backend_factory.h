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

#ifndef WPROMPT_BACKEND_FACTORY_H_
#define WPROMPT_BACKEND_FACTORY_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wprompt/backend.h"
#include "wprompt/vocabulary.h"

namespace wprompt {

// "mock:<script.json>", "exec:<program> [args...]" or "tcp:<host>:<port>".
struct BackendSpec {
  enum class Kind { kMock, kExec, kTcp };
  Kind kind = Kind::kMock;
  std::string mock_script;
  std::vector<std::string> argv;
  std::string host;
  int port = 0;

  // Relative mock script paths resolve against `base_dir`.
  static BackendSpec Parse(std::string_view spec,
                           const std::string& base_dir = "");
  std::string ToString() const;
  // Identity for cache keys: the mock script digest, otherwise the spec text.
  std::string Digest() const;
};

std::shared_ptr<Backend> MakeBackend(const BackendSpec& spec,
                                     const LoadedVocabulary& vocab);

}  // namespace wprompt

#endif  // WPROMPT_BACKEND_FACTORY_H_
