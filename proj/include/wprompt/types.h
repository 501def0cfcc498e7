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

#ifndef WPROMPT_TYPES_H_
#define WPROMPT_TYPES_H_

#include <cstdint>

namespace wprompt {

// Index into the model vocabulary.
using TokenId = std::int32_t;

enum class Task { kAsr, kSt };

// Decoder context is 448 tokens; prompts may use at most half.
inline constexpr int kDefaultContextSize = 448;
inline constexpr int kDefaultPromptBudget = kDefaultContextSize / 2;

}  // namespace wprompt

#endif  // WPROMPT_TYPES_H_
