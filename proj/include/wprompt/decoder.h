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

#ifndef WPROMPT_DECODER_H_
#define WPROMPT_DECODER_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wprompt/backend.h"
#include "wprompt/lid.h"
#include "wprompt/prompt.h"
#include "wprompt/prompt_builder.h"
#include "wprompt/vocab_mask.h"
#include "wprompt/vocabulary.h"

namespace wprompt {

enum class SearchStrategy { kGreedy, kBeam };

struct DecodeConfig {
  int max_new_tokens = 224;
  SearchStrategy strategy = SearchStrategy::kGreedy;
  int beam_width = 1;
  std::optional<VocabMask> mask;
};

struct DecodeResult {
  // Generated tokens, without the terminating eot.
  std::vector<TokenId> tokens;
  std::string text;
};

struct CsTranscription {
  LidResult lid;
  PromptSequence prompt;
  DecodeResult result;
};

// Sets every disallowed logit to the lowest finite float.
void ApplyMask(std::span<float> logits, const VocabMask& mask);

// Runs LID, prompted decoding and the code-switched pipeline against one
// backend. Holds references only; the caller keeps them alive.
class Decoder {
 public:
  Decoder(Backend& backend, const Tokenizer& tokenizer,
          const SpecialTokens& specials);

  const BackendInfo& info() const { return info_; }

  // One step on [<|sot|>]; softmax over the allowed language tokens only.
  LidResult RunLid(const AudioHandle& audio,
                   std::span<const std::string> allowed) const;

  DecodeResult Decode(const AudioHandle& audio, const PromptSequence& prompt,
                      const DecodeConfig& cfg) const;

  CsTranscription TranscribeCs(const AudioHandle& audio,
                               const ConcatConfig& cfg,
                               const DecodeConfig& decode_cfg) const;

 private:
  std::vector<float> StepChecked(const AudioHandle& audio,
                                 std::span<const TokenId> context,
                                 const std::vector<TokenId>& partial) const;
  DecodeResult Greedy(const AudioHandle& audio, std::vector<TokenId> context,
                      const DecodeConfig& cfg) const;
  DecodeResult Beam(const AudioHandle& audio,
                    const std::vector<TokenId>& prompt_tokens,
                    const DecodeConfig& cfg) const;

  Backend& backend_;
  const Tokenizer& tokenizer_;
  const SpecialTokens& specials_;
  BackendInfo info_;
};

const char* StrategyName(SearchStrategy strategy);

}  // namespace wprompt

#endif  // WPROMPT_DECODER_H_
