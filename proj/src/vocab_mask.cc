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

#include "wprompt/vocab_mask.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

#include "wprompt/codec.h"
#include "wprompt/errors.h"
#include "wprompt/utf8.h"

namespace wprompt {

VocabMask::VocabMask(int size, TokenId eot, std::string description)
    : size_(size),
      eot_(eot),
      description_(std::move(description)),
      words_((static_cast<std::size_t>(std::max(size, 0)) + 63) / 64, 0) {
  if (size <= 0) throw ConfigError("mask size must be positive");
  if (eot < 0 || eot >= size) throw ConfigError("eot outside mask");
  Allow(eot);
}

void VocabMask::Allow(TokenId id) {
  if (id < 0 || id >= size_) {
    throw ConfigError("token id out of mask range: " + std::to_string(id));
  }
  words_[id >> 6] |= std::uint64_t{1} << (id & 63);
}

void VocabMask::Disallow(TokenId id) {
  if (id < 0 || id >= size_) {
    throw ConfigError("token id out of mask range: " + std::to_string(id));
  }
  if (id == eot_) return;
  words_[id >> 6] &= ~(std::uint64_t{1} << (id & 63));
}

int VocabMask::CountAllowed() const {
  int n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

std::vector<TokenId> VocabMask::AllowedTokens() const {
  std::vector<TokenId> out;
  for (TokenId id = 0; id < size_; ++id) {
    if (allowed(id)) out.push_back(id);
  }
  return out;
}

std::string VocabMask::ToText() const {
  std::string bits((static_cast<std::size_t>(size_) + 7) / 8, '\0');
  for (TokenId id = 0; id < size_; ++id) {
    if (allowed(id)) bits[id / 8] |= static_cast<char>(1u << (id % 8));
  }
  std::ostringstream out;
  out << "vocab_mask v1 size " << size_ << " eot " << eot_ << " allowed "
      << CountAllowed() << "\n";
  out << "description " << description_ << "\n";
  out << Base64Encode(bits) << "\n";
  return out.str();
}

VocabMask VocabMask::FromText(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (lines.size() != 3) throw ConfigError("mask file: expected 3 lines");
  std::istringstream header(lines[0]);
  std::string magic, version, size_kw, eot_kw, allowed_kw;
  long long size = 0, eot = 0, allowed = 0;
  if (!(header >> magic >> version >> size_kw >> size >> eot_kw >> eot >>
        allowed_kw >> allowed) ||
      magic != "vocab_mask" || version != "v1" || size_kw != "size" ||
      eot_kw != "eot" || allowed_kw != "allowed") {
    throw ConfigError("mask file: malformed header");
  }
  if (!lines[1].starts_with("description ")) {
    throw ConfigError("mask file: missing description line");
  }
  if (size <= 0 || size > (1LL << 30) || eot < 0 || eot >= size) {
    throw ConfigError("mask file: size or eot out of range");
  }
  auto bits = Base64Decode(lines[2]);
  if (!bits || bits->size() != static_cast<std::size_t>((size + 7) / 8)) {
    throw ConfigError("mask file: malformed bitset");
  }
  VocabMask mask(static_cast<int>(size), static_cast<TokenId>(eot),
                 lines[1].substr(std::string_view("description ").size()));
  for (TokenId id = 0; id < size; ++id) {
    if ((static_cast<unsigned char>((*bits)[id / 8]) >> (id % 8)) & 1u) {
      mask.Allow(id);
    }
  }
  if (!mask.allowed(mask.eot())) throw ConfigError("mask file: eot cleared");
  if (mask.CountAllowed() != allowed) {
    throw ConfigError("mask file: allowed count mismatch");
  }
  return mask;
}

VocabMask VocabMask::Load(const std::string& path) {
  return FromText(ReadFileBytes(path));
}

ScriptSpec ScriptSpec::Make(std::string name,
                            std::vector<std::pair<char32_t, char32_t>> ranges) {
  for (const auto& [lo, hi] : ranges) {
    if (lo > hi || hi > 0x10FFFF) {
      throw ConfigError("script " + name + ": invalid range");
    }
  }
  std::sort(ranges.begin(), ranges.end());
  for (std::size_t i = 1; i < ranges.size(); ++i) {
    if (ranges[i].first <= ranges[i - 1].second) {
      throw ConfigError("script " + name + ": overlapping ranges");
    }
  }
  return ScriptSpec{std::move(name), std::move(ranges)};
}

bool ScriptSpec::Contains(char32_t cp) const {
  auto it = std::upper_bound(
      ranges.begin(), ranges.end(), cp,
      [](char32_t c, const std::pair<char32_t, char32_t>& r) {
        return c < r.first;
      });
  if (it == ranges.begin()) return false;
  --it;
  return cp <= it->second;
}

const ScriptSpec& CjkScript() {
  static const ScriptSpec spec = ScriptSpec::Make(
      "cjk", {{0x4E00, 0x9FFF}, {0x3400, 0x4DBF}, {0x3000, 0x303F}});
  return spec;
}

const ScriptSpec& CyrillicScript() {
  static const ScriptSpec spec =
      ScriptSpec::Make("cyrillic", {{0x0400, 0x04FF}, {0x0500, 0x052F}});
  return spec;
}

const ScriptSpec& ArabicScript() {
  static const ScriptSpec spec =
      ScriptSpec::Make("arabic", {{0x0600, 0x06FF}, {0x0750, 0x077F}});
  return spec;
}

std::optional<ScriptSpec> NamedScript(std::string_view name) {
  if (name == "cjk") return CjkScript();
  if (name == "cyrillic") return CyrillicScript();
  if (name == "arabic") return ArabicScript();
  return std::nullopt;
}

std::vector<ScriptSpec> ParseScriptConfig(std::string_view text) {
  std::vector<std::pair<std::string,
                        std::vector<std::pair<char32_t, char32_t>>>>
      pending;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::istringstream fields(line);
    std::string kw;
    if (!(fields >> kw) || kw.front() == '#') continue;
    auto fail = [&](const std::string& why) {
      return ConfigError("script config line " + std::to_string(line_no) +
                         ": " + why);
    };
    std::string a, b, extra;
    if (kw == "script") {
      if (!(fields >> a) || (fields >> extra)) throw fail("expected a name");
      for (const auto& p : pending) {
        if (p.first == a) throw fail("duplicate script " + a);
      }
      pending.push_back({a, {}});
    } else if (kw == "range") {
      if (pending.empty()) throw fail("range before any script");
      if (!(fields >> a >> b) || (fields >> extra)) {
        throw fail("expected 'range <lo-hex> <hi-hex>'");
      }
      try {
        std::size_t pa = 0, pb = 0;
        unsigned long lo = std::stoul(a, &pa, 16);
        unsigned long hi = std::stoul(b, &pb, 16);
        if (pa != a.size() || pb != b.size()) throw fail("bad hex");
        pending.back().second.push_back(
            {static_cast<char32_t>(lo), static_cast<char32_t>(hi)});
      } catch (const std::logic_error&) {
        throw fail("bad hex");
      }
    } else {
      throw fail("unknown keyword " + kw);
    }
  }
  std::vector<ScriptSpec> out;
  for (auto& [name, ranges] : pending) {
    out.push_back(ScriptSpec::Make(name, std::move(ranges)));
  }
  return out;
}

std::vector<ScriptSpec> LoadScriptConfig(const std::string& path) {
  return ParseScriptConfig(ReadFileBytes(path));
}

bool TokenFitsScript(std::string_view bytes, const ScriptSpec& spec) {
  auto cps = DecodeUtf8(bytes);
  if (!cps) return false;
  return std::all_of(cps->begin(), cps->end(), [&](char32_t cp) {
    return !IsAlphabetic(cp) || spec.Contains(cp);
  });
}

VocabMask FullTextMask(const Tokenizer& tokenizer,
                       const SpecialTokens& specials) {
  VocabMask mask(tokenizer.vocab_size(), specials.eot, "text");
  for (TokenId id = 0; id < tokenizer.vocab_size(); ++id) {
    if (!tokenizer.IsSpecial(id)) mask.Allow(id);
  }
  return mask;
}

VocabMask BuildScriptMask(const ScriptSpec& spec, const Tokenizer& tokenizer,
                          const SpecialTokens& specials) {
  VocabMask mask(tokenizer.vocab_size(), specials.eot, "script:" + spec.name);
  for (TokenId id = 0; id < tokenizer.vocab_size(); ++id) {
    if (tokenizer.IsSpecial(id)) continue;
    if (TokenFitsScript(tokenizer.TokenBytes(id), spec)) mask.Allow(id);
  }
  return mask;
}

VocabMask BuildFrequencyMask(const FrequencyMaskConfig& cfg,
                             const Tokenizer& tokenizer,
                             const SpecialTokens& specials) {
  if (!(cfg.percent > 0.0 && cfg.percent <= 100.0)) {
    throw ConfigError("frequency percent must be in (0, 100]");
  }
  if (cfg.corpus.empty()) throw ConfigError("frequency corpus is empty");
  // Whitespace-only tokens are layout, not vocabulary choice: they are not
  // ranked and stay allowed.
  std::vector<bool> blank(static_cast<std::size_t>(tokenizer.vocab_size()));
  for (TokenId id = 0; id < tokenizer.vocab_size(); ++id) {
    if (tokenizer.IsSpecial(id)) continue;
    auto cps = DecodeUtf8(tokenizer.TokenBytes(id));
    blank[id] = cps && !cps->empty() &&
                std::all_of(cps->begin(), cps->end(), IsWhitespace);
  }
  std::map<TokenId, long long> counts;
  for (TokenId id : tokenizer.Encode(cfg.corpus)) {
    if (!blank[id]) ++counts[id];
  }
  if (counts.empty()) throw ConfigError("frequency corpus has no word tokens");
  std::vector<std::pair<long long, TokenId>> ranked;
  ranked.reserve(counts.size());
  for (const auto& [id, count] : counts) ranked.emplace_back(-count, id);
  std::sort(ranked.begin(), ranked.end());
  const double exact = cfg.percent * static_cast<double>(ranked.size()) / 100.0;
  // Absorb representation error so e.g. 40% of 5 keeps exactly 2.
  std::size_t keep = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  keep = std::clamp<std::size_t>(keep, 1, ranked.size());

  std::ostringstream desc;
  desc << "frequency:" << cfg.percent << "%";
  VocabMask mask(tokenizer.vocab_size(), specials.eot, desc.str());
  for (std::size_t i = 0; i < keep; ++i) mask.Allow(ranked[i].second);
  for (TokenId id = 0; id < tokenizer.vocab_size(); ++id) {
    if (blank[id]) mask.Allow(id);
  }
  return mask;
}

std::optional<double> DefaultFrequencyPercent(std::string_view language) {
  if (language == "de") return 40.0;
  if (language == "fr") return 50.0;
  return std::nullopt;
}

VocabMask RestrictLanguages(std::span<const std::string> allowed,
                            int vocab_size, const SpecialTokens& specials) {
  if (allowed.empty()) throw ConfigError("language restriction is empty");
  std::string desc = "languages:";
  std::vector<TokenId> tokens;
  for (std::size_t i = 0; i < allowed.size(); ++i) {
    auto token = specials.LanguageToken(allowed[i]);
    if (!token) throw ConfigError("unknown language: " + allowed[i]);
    tokens.push_back(*token);
    desc += (i ? "," : "") + allowed[i];
  }
  VocabMask mask(vocab_size, specials.eot, desc);
  for (TokenId id : tokens) mask.Allow(id);
  return mask;
}

VocabMask Intersect(const VocabMask& a, const VocabMask& b) {
  if (a.size_ != b.size_) throw ConfigError("mask size mismatch");
  if (a.eot_ != b.eot_) throw ConfigError("mask eot mismatch");
  VocabMask out = a;
  out.description_ = a.description_ + "&" + b.description_;
  for (std::size_t i = 0; i < out.words_.size(); ++i) {
    out.words_[i] &= b.words_[i];
  }
  out.Allow(out.eot_);
  return out;
}

}  // namespace wprompt
