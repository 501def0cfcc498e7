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

#include "wprompt/hypothesis_cache.h"

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>

#include "wprompt/codec.h"
#include "wprompt/errors.h"

namespace wprompt {

namespace fs = std::filesystem;
using nlohmann::json;

HypothesisCache::HypothesisCache(std::string dir) : dir_(std::move(dir)) {}

std::string HypothesisCache::KeyOf(const json& key_fields) {
  return Sha256Hex(key_fields.dump());
}

std::string HypothesisCache::PathOf(const std::string& bucket,
                                    const std::string& key) const {
  return (fs::path(dir_) / bucket / (key + ".json")).string();
}

std::optional<json> HypothesisCache::Get(const std::string& bucket,
                                         const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(PathOf(bucket, key), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return json::parse(in);
  } catch (const json::exception&) {
    // truncated or foreign file: treat as a miss, it gets overwritten
    return std::nullopt;
  }
}

void HypothesisCache::Put(const std::string& bucket, const std::string& key,
                          const json& value) const {
  if (!enabled()) return;
  static std::atomic<unsigned long> counter{0};
  fs::path dir = fs::path(dir_) / bucket;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create cache dir " + dir.string());
  fs::path final_path = dir / (key + ".json");
  fs::path tmp = dir / (key + ".tmp." + std::to_string(::getpid()) + "." +
                        std::to_string(counter++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << value.dump() << '\n';
    if (!out) throw Error("cannot write cache entry " + tmp.string());
  }
  fs::rename(tmp, final_path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot publish cache entry " + final_path.string());
  }
}

std::size_t HypothesisCache::Count(const std::string& bucket) const {
  if (!enabled()) return 0;
  std::error_code ec;
  fs::directory_iterator it(fs::path(dir_) / bucket, ec);
  if (ec) return 0;
  std::size_t n = 0;
  for (const auto& e : it) {
    if (e.path().extension() == ".json") ++n;
  }
  return n;
}

}  // namespace wprompt
