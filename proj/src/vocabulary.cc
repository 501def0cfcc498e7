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

#include "wprompt/vocabulary.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "wprompt/codec.h"
#include "wprompt/errors.h"

namespace wprompt {
namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool ParseInt(std::string_view s, long long* out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool ValidLanguageCode(std::string_view code) {
  return !code.empty() && std::all_of(code.begin(), code.end(), [](char c) {
    return c >= 'a' && c <= 'z';
  });
}

}  // namespace

std::optional<TokenId> SpecialTokens::LanguageToken(
    std::string_view code) const {
  for (const auto& lang : languages) {
    if (lang.code == code) return lang.token;
  }
  return std::nullopt;
}

std::optional<std::string> SpecialTokens::LanguageOf(TokenId id) const {
  for (const auto& lang : languages) {
    if (lang.token == id) return lang.code;
  }
  return std::nullopt;
}

bool SpecialTokens::HasLanguage(std::string_view code) const {
  return LanguageToken(code).has_value();
}

bool SpecialTokens::IsSpecial(TokenId id) const {
  return id == sop || id == sot || id == eot || id == asr || id == st ||
         id == no_timestamps || LanguageOf(id).has_value();
}

std::optional<std::string> SpecialTokens::DisplayName(TokenId id) const {
  if (id == sop) return "sop";
  if (id == sot) return "sot";
  if (id == eot) return "eot";
  if (id == asr) return "asr";
  if (id == st) return "st";
  if (id == no_timestamps) return "notimestamps";
  return LanguageOf(id);
}

Vocabulary::Vocabulary(std::vector<std::string> token_bytes,
                       std::vector<SpecialEntry> specials)
    : token_bytes_(std::move(token_bytes)),
      special_table_(std::move(specials)),
      is_special_(token_bytes_.size(), false) {
  if (token_bytes_.empty()) throw ManifestError("empty vocabulary");
  for (std::size_t i = 0; i < token_bytes_.size(); ++i) {
    if (token_bytes_[i].empty()) {
      throw ManifestError("empty byte string for token " + std::to_string(i));
    }
  }
  std::set<std::string> names;
  std::optional<TokenId> sop, sot, eot, asr, st, no_ts;
  for (const auto& entry : special_table_) {
    if (entry.id < 0 || entry.id >= size()) {
      throw ManifestError("special token " + entry.name + " id " +
                          std::to_string(entry.id) + " out of range");
    }
    if (!names.insert(entry.name).second) {
      throw ManifestError("duplicate special token name: " + entry.name);
    }
    if (is_special_[entry.id]) {
      throw ManifestError("duplicate id " + std::to_string(entry.id) +
                          " in special token table");
    }
    is_special_[entry.id] = true;
    const std::string_view name = entry.name;
    if (name == kSpecialSop) {
      sop = entry.id;
    } else if (name == kSpecialSot) {
      sot = entry.id;
    } else if (name == kSpecialEot) {
      eot = entry.id;
    } else if (name == kSpecialAsr) {
      asr = entry.id;
    } else if (name == kSpecialSt) {
      st = entry.id;
    } else if (name == kSpecialNoTimestamps) {
      no_ts = entry.id;
    } else if (name.starts_with(kLanguagePrefix)) {
      std::string code(name.substr(kLanguagePrefix.size()));
      if (!ValidLanguageCode(code)) {
        throw ManifestError("invalid language code: " + code);
      }
      specials_.languages.push_back({code, entry.id});
    } else {
      throw ManifestError("unknown special token name: " + entry.name);
    }
  }
  auto require = [](const std::optional<TokenId>& id, std::string_view name) {
    if (!id) throw ManifestError("missing special token " + std::string(name));
    return *id;
  };
  specials_.sop = require(sop, kSpecialSop);
  specials_.sot = require(sot, kSpecialSot);
  specials_.eot = require(eot, kSpecialEot);
  specials_.asr = require(asr, kSpecialAsr);
  specials_.st = require(st, kSpecialSt);
  specials_.no_timestamps = require(no_ts, kSpecialNoTimestamps);
  if (specials_.languages.empty()) {
    throw ManifestError("missing special token: no language tokens");
  }
}

Vocabulary Vocabulary::Parse(std::string_view manifest) {
  long long vocab_size = -1;
  std::vector<std::optional<std::string>> tokens;
  std::vector<SpecialEntry> specials;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < manifest.size()) {
    std::size_t end = manifest.find('\n', pos);
    if (end == std::string_view::npos) end = manifest.size();
    std::string_view line = manifest.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    auto fail = [&](const std::string& why) {
      return ManifestError("vocab manifest line " + std::to_string(line_no) +
                           ": " + why);
    };
    auto fields = SplitFields(line);
    if (vocab_size < 0) {
      long long n = 0;
      if (fields.size() != 2 || fields[0] != "vocab_size" ||
          !ParseInt(fields[1], &n) || n <= 0 || n > (1LL << 30)) {
        throw fail("expected header 'vocab_size N'");
      }
      vocab_size = n;
      tokens.resize(static_cast<std::size_t>(n));
      continue;
    }
    long long id = 0;
    if (fields.size() == 3 && fields[0] == "token") {
      if (!ParseInt(fields[1], &id)) throw fail("malformed token id");
      if (id < 0 || id >= vocab_size) throw fail("token id out of range");
      auto bytes = Base64Decode(fields[2]);
      if (!bytes) throw fail("malformed base64");
      if (tokens[id]) throw fail("duplicate id " + std::to_string(id));
      tokens[id] = std::move(*bytes);
    } else if (fields.size() == 3 && fields[0] == "special") {
      if (!ParseInt(fields[2], &id)) throw fail("malformed special id");
      specials.push_back({std::string(fields[1]), static_cast<TokenId>(id)});
    } else {
      throw fail("unrecognized record");
    }
  }
  if (vocab_size < 0) throw ManifestError("vocab manifest: missing header");
  std::vector<std::string> bytes;
  bytes.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i]) {
      throw ManifestError("vocab manifest: missing token for id " +
                          std::to_string(i));
    }
    bytes.push_back(std::move(*tokens[i]));
  }
  return Vocabulary(std::move(bytes), std::move(specials));
}

Vocabulary Vocabulary::Load(const std::string& path) {
  std::string text;
  try {
    text = ReadFileBytes(path);
  } catch (const Error& e) {
    throw ManifestError(e.what());
  }
  return Parse(text);
}

std::string Vocabulary::ToManifest() const {
  std::ostringstream out;
  out << "vocab_size " << size() << "\n";
  for (int i = 0; i < size(); ++i) {
    out << "token " << i << " " << Base64Encode(token_bytes_[i]) << "\n";
  }
  for (const auto& entry : special_table_) {
    out << "special " << entry.name << " " << entry.id << "\n";
  }
  return out.str();
}

const std::string& Vocabulary::token_bytes(TokenId id) const {
  if (id < 0 || id >= size()) {
    throw Error("token id out of range: " + std::to_string(id));
  }
  return token_bytes_[id];
}

bool Vocabulary::IsSpecial(TokenId id) const {
  return id >= 0 && id < size() && is_special_[id];
}

GreedyTokenizer::GreedyTokenizer(std::shared_ptr<const Vocabulary> vocab)
    : vocab_(std::move(vocab)) {
  for (TokenId id = 0; id < vocab_->size(); ++id) {
    if (vocab_->IsSpecial(id)) continue;
    const std::string& bytes = vocab_->token_bytes(id);
    // Lowest id wins when byte strings repeat.
    by_bytes_.emplace(bytes, id);
    max_token_length_ = std::max(max_token_length_, bytes.size());
  }
}

std::vector<TokenId> GreedyTokenizer::Encode(std::string_view text) const {
  std::vector<TokenId> out;
  std::size_t pos = 0;
  std::string key;
  while (pos < text.size()) {
    std::size_t len = std::min(max_token_length_, text.size() - pos);
    bool matched = false;
    for (; len > 0; --len) {
      key.assign(text.substr(pos, len));
      auto it = by_bytes_.find(key);
      if (it != by_bytes_.end()) {
        out.push_back(it->second);
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw Error("text not covered by vocabulary at byte " +
                  std::to_string(pos));
    }
  }
  return out;
}

std::string GreedyTokenizer::Decode(std::span<const TokenId> tokens) const {
  std::string out;
  for (TokenId id : tokens) {
    if (vocab_->IsSpecial(id)) continue;
    out += vocab_->token_bytes(id);
  }
  return out;
}

const std::string& GreedyTokenizer::TokenBytes(TokenId id) const {
  return vocab_->token_bytes(id);
}

LoadedVocabulary MakeLoadedVocabulary(Vocabulary vocab) {
  auto shared = std::make_shared<const Vocabulary>(std::move(vocab));
  return {shared, std::make_shared<const GreedyTokenizer>(shared)};
}

LoadedVocabulary LoadVocabManifest(const std::string& path) {
  return MakeLoadedVocabulary(Vocabulary::Load(path));
}

std::string RenderTokens(std::span<const TokenId> tokens, const Tokenizer& tok,
                         const SpecialTokens& specials,
                         bool show_no_timestamps) {
  std::string out;
  for (TokenId id : tokens) {
    if (id == specials.no_timestamps && !show_no_timestamps) continue;
    if (auto name = specials.DisplayName(id)) {
      out += "<|" + *name + "|>";
    } else {
      out += tok.TokenBytes(id);
    }
  }
  return out;
}

}  // namespace wprompt
