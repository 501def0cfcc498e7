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

#include "wprompt/protocol.h"

#include <cmath>
#include <limits>

#include "wprompt/errors.h"

namespace wprompt {

using nlohmann::json;

namespace {

std::string Dump(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

void CheckEnvelope(const json& response) {
  if (!response.is_object()) throw BackendError("engine response is not an object");
  auto v = response.find("v");
  if (v == response.end() || !v->is_number_integer() ||
      v->get<int>() != kProtocolVersion) {
    throw BackendError("engine response has wrong protocol version");
  }
  auto err = response.find("error");
  if (err != response.end()) {
    throw BackendError("engine error: " +
                       (err->is_string() ? err->get<std::string>() : Dump(*err)));
  }
}

std::string ErrorResponse(const std::string& message) {
  return Dump(json{{"v", kProtocolVersion}, {"error", message}});
}

}  // namespace

json MakeInfoRequest() { return json{{"v", kProtocolVersion}, {"op", "info"}}; }

json MakeStepRequest(const AudioHandle& audio,
                     std::span<const TokenId> context) {
  return json{{"v", kProtocolVersion},
              {"op", "step"},
              {"audio", audio.ref},
              {"context", std::vector<TokenId>(context.begin(), context.end())}};
}

BackendInfo ParseInfoResponse(const json& response) {
  CheckEnvelope(response);
  BackendInfo info;
  try {
    info.vocab_size = response.at("vocab_size").get<int>();
    info.languages = response.at("languages").get<std::vector<std::string>>();
    info.context_size = response.value("context_size", kDefaultContextSize);
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed info response: ") + e.what());
  }
  if (info.vocab_size <= 0 || info.context_size <= 0) {
    throw BackendError("malformed info response: non-positive sizes");
  }
  // One request in flight per connection.
  info.concurrent_steps = false;
  return info;
}

std::vector<float> ParseStepResponse(const json& response) {
  CheckEnvelope(response);
  auto it = response.find("logits");
  if (it == response.end() || !it->is_array()) {
    throw BackendError("malformed step response: missing logits");
  }
  std::vector<float> logits;
  logits.reserve(it->size());
  for (const auto& x : *it) {
    if (!x.is_number()) {
      throw BackendError("malformed step response: non-numeric logit");
    }
    logits.push_back(x.get<float>());
  }
  return logits;
}

std::string ServeRequestLine(std::string_view line, Backend& engine) {
  json request;
  try {
    request = json::parse(line);
  } catch (const json::exception&) {
    return ErrorResponse("malformed JSON");
  }
  try {
    if (!request.is_object()) return ErrorResponse("request is not an object");
    auto v = request.find("v");
    if (v == request.end() || !v->is_number_integer() ||
        v->get<long long>() != kProtocolVersion) {
      return ErrorResponse("unsupported protocol version");
    }
    auto op = request.find("op");
    if (op == request.end() || !op->is_string()) {
      return ErrorResponse("missing op");
    }
    if (*op == "info") {
      BackendInfo info = engine.Info();
      return Dump(json{{"v", kProtocolVersion},
                       {"vocab_size", info.vocab_size},
                       {"languages", info.languages},
                       {"context_size", info.context_size}});
    }
    if (*op == "step") {
      auto audio = request.find("audio");
      if (audio == request.end() || !audio->is_string() ||
          audio->get<std::string>().empty()) {
        return ErrorResponse("step requires a non-empty audio string");
      }
      auto ctx = request.find("context");
      if (ctx == request.end() || !ctx->is_array()) {
        return ErrorResponse("step requires a context array");
      }
      const int vocab_size = engine.Info().vocab_size;
      std::vector<TokenId> context;
      for (const auto& t : *ctx) {
        if (!t.is_number_integer() || t.get<long long>() < 0 ||
            t.get<long long>() >= vocab_size) {
          return ErrorResponse("context holds an invalid token id");
        }
        context.push_back(t.get<TokenId>());
      }
      std::vector<float> logits =
          engine.Step(AudioHandle{audio->get<std::string>()}, context);
      for (float& x : logits) {
        if (!std::isfinite(x)) {
          x = x > 0 ? std::numeric_limits<float>::max()
                    : std::numeric_limits<float>::lowest();
        }
      }
      return Dump(json{{"v", kProtocolVersion}, {"logits", logits}});
    }
    return ErrorResponse("unknown op");
  } catch (const std::exception& e) {
    return ErrorResponse(e.what());
  }
}

}  // namespace wprompt
