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

#ifndef WPROMPT_MOCK_BACKEND_H_
#define WPROMPT_MOCK_BACKEND_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wprompt/backend.h"
#include "wprompt/prompt.h"
#include "wprompt/vocabulary.h"

namespace wprompt {

// Scripted backend for tests and offline runs.
//
// Script (JSON):
//   {"version": 1,
//    "utterances": {
//      "<audio ref>": {
//        "lid": {"zh": 3.0, "en": 0.5},          // language logits at [sot]
//        "responses": [                         // first match wins
//          {"languages": ["zh", "en"], "task": "asr", "has_previous_text": false,
//           "candidates": [{"text": "...", "score": 5.0}]},
//          {"candidates": [...]}                // no constraints: fallback
//        ]}}}
//
// At generation step i every candidate votes `score` for its i-th token (or
// eot once its text is exhausted); other tokens get kFloorLogit and eot at
// least kEotLogit, so a fully masked step ends the utterance.
struct MockCandidate {
  std::string text;
  double score = 1.0;
};

struct MockResponse {
  std::optional<std::vector<std::string>> languages;
  std::optional<Task> task;
  std::optional<bool> has_previous_text;
  std::vector<MockCandidate> candidates;
};

struct MockUtterance {
  std::map<std::string, double> lid;
  std::vector<MockResponse> responses;
};

struct MockScript {
  std::map<std::string, MockUtterance> utterances;

  static MockScript FromJson(const nlohmann::json& j);
  static MockScript Load(const std::string& path);
};

class MockBackend : public Backend {
 public:
  static constexpr float kFloorLogit = -10.0f;
  static constexpr float kEotLogit = -5.0f;
  static constexpr float kUnlistedLanguageLogit = -30.0f;

  MockBackend(MockScript script, std::shared_ptr<const Tokenizer> tokenizer,
              SpecialTokens specials);

  BackendInfo Info() override;
  std::vector<float> Step(const AudioHandle& audio,
                          std::span<const TokenId> context) override;

 private:
  struct EncodedResponse {
    MockResponse match;
    std::vector<std::pair<std::vector<TokenId>, float>> candidates;
  };
  struct EncodedUtterance {
    std::map<std::string, double> lid;
    std::vector<EncodedResponse> responses;
  };

  std::shared_ptr<const Tokenizer> tokenizer_;
  SpecialTokens specials_;
  std::map<std::string, EncodedUtterance> utterances_;
};

}  // namespace wprompt

#endif  // WPROMPT_MOCK_BACKEND_H_
