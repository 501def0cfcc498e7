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

#ifndef WPROMPT_HYPOTHESIS_CACHE_H_
#define WPROMPT_HYPOTHESIS_CACHE_H_

#include <optional>
#include <string>

#include "json.hpp"

namespace wprompt {

// Content-addressed JSON store: <dir>/<bucket>/<key>.json. Writes go to a
// temporary file first and are renamed into place, so concurrent writers of
// the same key are harmless. An empty dir disables the cache.
class HypothesisCache {
 public:
  explicit HypothesisCache(std::string dir);

  bool enabled() const { return !dir_.empty(); }
  std::optional<nlohmann::json> Get(const std::string& bucket,
                                    const std::string& key) const;
  void Put(const std::string& bucket, const std::string& key,
           const nlohmann::json& value) const;
  // Number of stored entries in a bucket.
  std::size_t Count(const std::string& bucket) const;

  // sha256 of the compact dump of a key object.
  static std::string KeyOf(const nlohmann::json& key_fields);

 private:
  std::string PathOf(const std::string& bucket, const std::string& key) const;

  std::string dir_;
};

}  // namespace wprompt

#endif  // WPROMPT_HYPOTHESIS_CACHE_H_
