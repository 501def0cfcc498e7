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

#include "wprompt/mock_backend.h"

#include <algorithm>

#include "wprompt/codec.h"
#include "wprompt/errors.h"

namespace wprompt {

using nlohmann::json;

MockScript MockScript::FromJson(const json& j) {
  try {
    if (j.value("version", 1) != 1) {
      throw ConfigError("mock script: unsupported version");
    }
    MockScript script;
    for (const auto& [audio, u] : j.at("utterances").items()) {
      MockUtterance utt;
      if (u.contains("lid")) {
        for (const auto& [code, logit] : u.at("lid").items()) {
          utt.lid[code] = logit.get<double>();
        }
      }
      for (const auto& r : u.value("responses", json::array())) {
        MockResponse resp;
        if (r.contains("languages")) {
          resp.languages = r.at("languages").get<std::vector<std::string>>();
        }
        if (r.contains("task")) {
          resp.task = ParseTask(r.at("task").get<std::string>());
        }
        if (r.contains("has_previous_text")) {
          resp.has_previous_text = r.at("has_previous_text").get<bool>();
        }
        for (const auto& c : r.at("candidates")) {
          resp.candidates.push_back(
              {c.at("text").get<std::string>(), c.value("score", 1.0)});
        }
        utt.responses.push_back(std::move(resp));
      }
      script.utterances[audio] = std::move(utt);
    }
    return script;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("mock script: ") + e.what());
  }
}

MockScript MockScript::Load(const std::string& path) {
  json j;
  try {
    j = json::parse(ReadFileBytes(path));
  } catch (const json::exception& e) {
    throw ConfigError("mock script " + path + ": " + e.what());
  }
  return FromJson(j);
}

MockBackend::MockBackend(MockScript script,
                         std::shared_ptr<const Tokenizer> tokenizer,
                         SpecialTokens specials)
    : tokenizer_(std::move(tokenizer)), specials_(std::move(specials)) {
  for (auto& [audio, utt] : script.utterances) {
    EncodedUtterance enc;
    enc.lid = utt.lid;
    for (const auto& [code, logit] : utt.lid) {
      if (!specials_.HasLanguage(code)) {
        throw ConfigError("mock script: unknown LID language " + code);
      }
    }
    for (auto& resp : utt.responses) {
      EncodedResponse er;
      for (const auto& c : resp.candidates) {
        er.candidates.emplace_back(tokenizer_->Encode(c.text),
                                   static_cast<float>(c.score));
      }
      er.match = std::move(resp);
      enc.responses.push_back(std::move(er));
    }
    utterances_[audio] = std::move(enc);
  }
}

BackendInfo MockBackend::Info() {
  BackendInfo info;
  info.vocab_size = tokenizer_->vocab_size();
  for (const auto& lang : specials_.languages) info.languages.push_back(lang.code);
  info.concurrent_steps = true;
  return info;
}

std::vector<float> MockBackend::Step(const AudioHandle& audio,
                                     std::span<const TokenId> context) {
  auto it = utterances_.find(audio.ref);
  if (it == utterances_.end()) {
    throw BackendError("mock backend: unknown audio " + audio.ref);
  }
  const EncodedUtterance& utt = it->second;
  std::vector<float> logits(static_cast<std::size_t>(tokenizer_->vocab_size()),
                            kFloorLogit);

  // Locate the prompt: optional sop block, sot, languages, task, notimestamps.
  std::size_t i = 0;
  bool has_prev = false;
  if (i < context.size() && context[i] == specials_.sop) {
    has_prev = true;
    while (i < context.size() && context[i] != specials_.sot) ++i;
  }
  if (i >= context.size() || context[i] != specials_.sot) {
    throw BackendError("mock backend: context lacks <|sot|>");
  }
  ++i;
  if (i == context.size()) {
    for (const auto& lang : specials_.languages) {
      auto found = utt.lid.find(lang.code);
      logits[lang.token] = found == utt.lid.end()
                               ? kUnlistedLanguageLogit
                               : static_cast<float>(found->second);
    }
    return logits;
  }
  std::vector<std::string> languages;
  while (i < context.size()) {
    auto code = specials_.LanguageOf(context[i]);
    if (!code) break;
    languages.push_back(*code);
    ++i;
  }
  std::optional<Task> task;
  if (i < context.size() && context[i] == specials_.asr) {
    task = Task::kAsr;
    ++i;
  } else if (i < context.size() && context[i] == specials_.st) {
    task = Task::kSt;
    ++i;
  }
  if (i < context.size() && context[i] == specials_.no_timestamps) ++i;
  const std::size_t position = context.size() - i;

  const EncodedResponse* chosen = nullptr;
  for (const auto& r : utt.responses) {
    const MockResponse& m = r.match;
    if (m.languages && *m.languages != languages) continue;
    if (m.task && m.task != task) continue;
    if (m.has_previous_text && *m.has_previous_text != has_prev) continue;
    chosen = &r;
    break;
  }
  logits[specials_.eot] = kEotLogit;
  if (chosen == nullptr) return logits;
  for (const auto& [tokens, score] : chosen->candidates) {
    TokenId target;
    if (position < tokens.size()) {
      target = tokens[position];
    } else if (position == tokens.size()) {
      target = specials_.eot;
    } else {
      continue;
    }
    logits[target] = std::max(logits[target], score);
  }
  return logits;
}

}  // namespace wprompt
