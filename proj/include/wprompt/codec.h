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

#ifndef WPROMPT_CODEC_H_
#define WPROMPT_CODEC_H_

#include <optional>
#include <string>
#include <string_view>

namespace wprompt {

std::string Base64Encode(std::string_view bytes);
// Returns nullopt on malformed input (bad alphabet, length or padding).
std::optional<std::string> Base64Decode(std::string_view text);

// Lowercase hex SHA-256 of `bytes`.
std::string Sha256Hex(std::string_view bytes);
// SHA-256 of a file's contents; throws wprompt::Error if unreadable.
std::string Sha256File(const std::string& path);

// Reads a whole file; throws wprompt::Error if unreadable.
std::string ReadFileBytes(const std::string& path);

}  // namespace wprompt

#endif  // WPROMPT_CODEC_H_
