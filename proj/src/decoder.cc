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

#include "wprompt/decoder.h"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "wprompt/errors.h"

namespace wprompt {
namespace {

// Finite logit or -inf (NaN counts as -inf).
double Sanitize(float x) { return std::isnan(x) ? -INFINITY : x; }

std::vector<TokenId> AllowedIds(int vocab_size,
                                const std::optional<VocabMask>& mask) {
  if (mask) return mask->AllowedTokens();
  std::vector<TokenId> ids(static_cast<std::size_t>(vocab_size));
  for (int i = 0; i < vocab_size; ++i) ids[i] = i;
  return ids;
}

// Highest logit among `allowed`, lowest id on ties.
TokenId Argmax(std::span<const float> logits,
               const std::vector<TokenId>& allowed) {
  TokenId best = allowed.front();
  double best_value = Sanitize(logits[best]);
  for (TokenId id : allowed) {
    double v = Sanitize(logits[id]);
    if (v > best_value) {
      best = id;
      best_value = v;
    }
  }
  return best;
}

double LogSumExp(std::span<const float> logits,
                 const std::vector<TokenId>& allowed) {
  double max_value = -INFINITY;
  for (TokenId id : allowed) max_value = std::max(max_value, Sanitize(logits[id]));
  if (!std::isfinite(max_value)) return max_value;
  double sum = 0.0;
  for (TokenId id : allowed) sum += std::exp(Sanitize(logits[id]) - max_value);
  return max_value + std::log(sum);
}

}  // namespace

GuardedBackend::GuardedBackend(std::shared_ptr<Backend> inner)
    : inner_(std::move(inner)), info_(inner_->Info()) {}

std::vector<float> GuardedBackend::Step(const AudioHandle& audio,
                                        std::span<const TokenId> context) {
  ++step_calls_;
  if (info_.concurrent_steps) return inner_->Step(audio, context);
  std::lock_guard<std::mutex> lock(mu_);
  return inner_->Step(audio, context);
}

void ApplyMask(std::span<float> logits, const VocabMask& mask) {
  if (logits.size() != static_cast<std::size_t>(mask.size())) {
    throw ConfigError("mask size " + std::to_string(mask.size()) +
                      " != logits size " + std::to_string(logits.size()));
  }
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!mask.allowed(static_cast<TokenId>(i))) logits[i] = -FLT_MAX;
  }
}

Decoder::Decoder(Backend& backend, const Tokenizer& tokenizer,
                 const SpecialTokens& specials)
    : backend_(backend),
      tokenizer_(tokenizer),
      specials_(specials),
      info_(backend.Info()) {
  if (info_.vocab_size != tokenizer_.vocab_size()) {
    throw BackendError("backend vocab size " +
                       std::to_string(info_.vocab_size) +
                       " != tokenizer vocab size " +
                       std::to_string(tokenizer_.vocab_size()));
  }
}

std::vector<float> Decoder::StepChecked(
    const AudioHandle& audio, std::span<const TokenId> context,
    const std::vector<TokenId>& partial) const {
  std::vector<float> logits;
  try {
    logits = backend_.Step(audio, context);
  } catch (const Error& e) {
    throw DecodeError(std::string("backend step failed: ") + e.what(), partial);
  }
  if (logits.size() != static_cast<std::size_t>(info_.vocab_size)) {
    throw DecodeError("backend returned " + std::to_string(logits.size()) +
                          " logits, expected " +
                          std::to_string(info_.vocab_size),
                      partial);
  }
  return logits;
}

LidResult Decoder::RunLid(const AudioHandle& audio,
                          std::span<const std::string> allowed) const {
  for (const auto& code : allowed) {
    if (std::find(info_.languages.begin(), info_.languages.end(), code) ==
        info_.languages.end()) {
      throw BackendError("language not supported by backend: " + code);
    }
  }
  VocabMask lid_mask = RestrictLanguages(allowed, info_.vocab_size, specials_);
  const std::vector<TokenId> context = {specials_.sot};
  std::vector<float> logits = StepChecked(audio, context, {});
  std::vector<std::pair<std::string, double>> restricted;
  for (const auto& code : allowed) {
    TokenId id = *specials_.LanguageToken(code);
    if (lid_mask.allowed(id)) restricted.emplace_back(code, Sanitize(logits[id]));
  }
  return LidFromLogits(restricted);
}

DecodeResult Decoder::Decode(const AudioHandle& audio,
                             const PromptSequence& prompt,
                             const DecodeConfig& cfg) const {
  if (audio.ref.empty()) throw ConfigError("empty audio reference");
  if (cfg.max_new_tokens < 0) throw ConfigError("max_new_tokens must be >= 0");
  if (cfg.strategy == SearchStrategy::kBeam && cfg.beam_width < 1) {
    throw ConfigError("beam width must be >= 1");
  }
  if (cfg.mask && cfg.mask->size() != info_.vocab_size) {
    throw ConfigError("mask size " + std::to_string(cfg.mask->size()) +
                      " != backend vocab size " +
                      std::to_string(info_.vocab_size));
  }
  std::vector<TokenId> context;
  try {
    context = SerializePrompt(prompt, specials_, info_.context_size);
  } catch (const PromptError& e) {
    throw PromptError(std::string("prompt exceeds context or is invalid: ") +
                      e.what());
  }
  if (cfg.max_new_tokens == 0) return {};
  if (cfg.strategy == SearchStrategy::kBeam) return Beam(audio, context, cfg);
  return Greedy(audio, std::move(context), cfg);
}

DecodeResult Decoder::Greedy(const AudioHandle& audio,
                             std::vector<TokenId> context,
                             const DecodeConfig& cfg) const {
  const std::vector<TokenId> allowed = AllowedIds(info_.vocab_size, cfg.mask);
  DecodeResult result;
  for (int step = 0; step < cfg.max_new_tokens; ++step) {
    if (context.size() >= static_cast<std::size_t>(info_.context_size)) break;
    std::vector<float> logits = StepChecked(audio, context, result.tokens);
    if (cfg.mask) ApplyMask(logits, *cfg.mask);
    TokenId next = Argmax(logits, allowed);
    if (next == specials_.eot) break;
    result.tokens.push_back(next);
    context.push_back(next);
  }
  result.text = tokenizer_.Decode(result.tokens);
  return result;
}

DecodeResult Decoder::Beam(const AudioHandle& audio,
                           const std::vector<TokenId>& prompt_tokens,
                           const DecodeConfig& cfg) const {
  struct Hypothesis {
    std::vector<TokenId> tokens;
    double logprob = 0.0;
  };
  struct Candidate {
    std::size_t parent;
    TokenId token;
    float logit;
    double score;
  };
  const std::vector<TokenId> allowed = AllowedIds(info_.vocab_size, cfg.mask);
  const std::size_t width = static_cast<std::size_t>(cfg.beam_width);
  std::vector<Hypothesis> alive(1);
  std::vector<Hypothesis> finished;

  for (int step = 0; step < cfg.max_new_tokens && !alive.empty(); ++step) {
    if (prompt_tokens.size() + alive.front().tokens.size() >=
        static_cast<std::size_t>(info_.context_size)) {
      break;
    }
    std::vector<Candidate> candidates;
    for (std::size_t h = 0; h < alive.size(); ++h) {
      std::vector<TokenId> context = prompt_tokens;
      context.insert(context.end(), alive[h].tokens.begin(),
                     alive[h].tokens.end());
      std::vector<float> logits = StepChecked(audio, context, alive[h].tokens);
      if (cfg.mask) ApplyMask(logits, *cfg.mask);
      const double lse = LogSumExp(logits, allowed);
      // Rank by raw logit within a hypothesis so width 1 matches greedy.
      std::vector<TokenId> order = allowed;
      const std::size_t take = std::min(width, order.size());
      std::partial_sort(order.begin(), order.begin() + take, order.end(),
                        [&](TokenId a, TokenId b) {
                          double va = Sanitize(logits[a]);
                          double vb = Sanitize(logits[b]);
                          if (va != vb) return va > vb;
                          return a < b;
                        });
      for (std::size_t i = 0; i < take; ++i) {
        TokenId t = order[i];
        candidates.push_back(
            {h, t, logits[t], alive[h].logprob + (Sanitize(logits[t]) - lse)});
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return a.score > b.score;
                     });
    std::vector<Hypothesis> next;
    for (const Candidate& c : candidates) {
      Hypothesis hyp{alive[c.parent].tokens, c.score};
      if (c.token == specials_.eot) {
        if (finished.size() < width) finished.push_back(std::move(hyp));
      } else {
        hyp.tokens.push_back(c.token);
        next.push_back(std::move(hyp));
      }
      if (next.size() == width) break;
    }
    alive = std::move(next);
    if (finished.size() >= width) break;
  }

  // Rank by mean log-probability; finished hypotheses count their eot.
  const Hypothesis* best = nullptr;
  double best_score = -INFINITY;
  auto consider = [&](const Hypothesis& h, std::size_t length) {
    double score = h.logprob / static_cast<double>(std::max<std::size_t>(length, 1));
    if (best == nullptr || score > best_score) {
      best = &h;
      best_score = score;
    }
  };
  for (const auto& h : finished) consider(h, h.tokens.size() + 1);
  if (finished.empty()) {
    for (const auto& h : alive) consider(h, h.tokens.size());
  }
  DecodeResult result;
  if (best != nullptr) result.tokens = best->tokens;
  result.text = tokenizer_.Decode(result.tokens);
  return result;
}

CsTranscription Decoder::TranscribeCs(const AudioHandle& audio,
                                      const ConcatConfig& cfg,
                                      const DecodeConfig& decode_cfg) const {
  cfg.Validate(specials_);
  CsTranscription out;
  const std::vector<std::string> pair(cfg.languages.begin(),
                                      cfg.languages.end());
  out.lid = RunLid(audio, pair);
  out.prompt = BuildCsPrompt(out.lid, cfg, specials_);
  out.result = Decode(audio, out.prompt, decode_cfg);
  return out;
}

const char* StrategyName(SearchStrategy strategy) {
  return strategy == SearchStrategy::kGreedy ? "greedy" : "beam";
}

}  // namespace wprompt
