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

#ifndef WPROMPT_BACKEND_H_
#define WPROMPT_BACKEND_H_

#include <atomic>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "wprompt/types.h"

namespace wprompt {

// Reference to one utterance's audio, resolved by the backend (a file path
// or a feature-blob id).
struct AudioHandle {
  std::string ref;
};

struct BackendInfo {
  int vocab_size = 0;
  std::vector<std::string> languages;
  int context_size = kDefaultContextSize;
  // Whether Step may be called from several threads at once.
  bool concurrent_steps = false;
};

// Model engine contract: next-token logits for (audio, decoder context).
class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendInfo Info() = 0;
  // Returns vocab_size logits. Throws BackendError on failure.
  virtual std::vector<float> Step(const AudioHandle& audio,
                                  std::span<const TokenId> context) = 0;
};

// Forwards to another backend, serializing calls unless the inner backend
// allows concurrent stepping, and counting Step calls.
class GuardedBackend : public Backend {
 public:
  explicit GuardedBackend(std::shared_ptr<Backend> inner);

  BackendInfo Info() override { return info_; }
  std::vector<float> Step(const AudioHandle& audio,
                          std::span<const TokenId> context) override;
  long long step_calls() const { return step_calls_.load(); }

 private:
  std::shared_ptr<Backend> inner_;
  BackendInfo info_;
  std::mutex mu_;
  std::atomic<long long> step_calls_{0};
};

}  // namespace wprompt

#endif  // WPROMPT_BACKEND_H_
