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

#ifndef WPROMPT_UTF8_H_
#define WPROMPT_UTF8_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wprompt {

// Strict decode; nullopt if `bytes` is not complete, well-formed UTF-8.
std::optional<std::u32string> DecodeUtf8(std::string_view bytes);
std::string EncodeUtf8(char32_t cp);
std::string EncodeUtf8(std::u32string_view cps);

// Character classes backed by the ICU character database.
// Letters and combining marks (general categories L and M).
bool IsAlphabetic(char32_t cp);
// General category P.
bool IsPunctuation(char32_t cp);
bool IsWhitespace(char32_t cp);
char32_t ToLower(char32_t cp);

}  // namespace wprompt

#endif  // WPROMPT_UTF8_H_
