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

#ifndef WPROMPT_PROTOCOL_H_
#define WPROMPT_PROTOCOL_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wprompt/backend.h"

namespace wprompt {

// Engine wire protocol, version 1: one UTF-8 JSON object per line, one
// request in flight per connection, "v": 1 in every message.
//
//   -> {"v":1,"op":"info"}
//   <- {"v":1,"vocab_size":N,"languages":["en",...],"context_size":448}
//   -> {"v":1,"op":"step","audio":"<ref>","context":[ids...]}
//   <- {"v":1,"logits":[floats...]}
//   <- {"v":1,"error":"..."}                      on any failure
inline constexpr int kProtocolVersion = 1;

nlohmann::json MakeInfoRequest();
nlohmann::json MakeStepRequest(const AudioHandle& audio,
                               std::span<const TokenId> context);

// Client side. Throw BackendError on error responses, version mismatch or
// malformed payloads.
BackendInfo ParseInfoResponse(const nlohmann::json& response);
std::vector<float> ParseStepResponse(const nlohmann::json& response);

// Engine side: answers one request line with one response line (no trailing
// newline). Never throws; every failure becomes an error response.
std::string ServeRequestLine(std::string_view line, Backend& engine);

}  // namespace wprompt

#endif  // WPROMPT_PROTOCOL_H_
