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

#include "wprompt/manifest.h"

#include <filesystem>
#include <set>
#include <sstream>

#include "wprompt/codec.h"
#include "wprompt/errors.h"

namespace wprompt {

using nlohmann::json;

std::string ResolvePath(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

std::string DirectoryOf(const std::string& path) {
  auto parent = std::filesystem::path(path).parent_path();
  return parent.empty() ? "." : parent.string();
}

json ManifestRecord::ToJson() const {
  return json{{"id", id},
              {"audio", audio},
              {"reference", reference},
              {"task", ScoreTaskName(task)},
              {"languages", languages},
              {"frames", frames}};
}

namespace {

std::string StringField(const json& j, const char* key, bool required) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (required) throw ManifestError(std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) {
    throw ManifestError(std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> StringList(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_array()) {
    throw ManifestError(std::string("field '") + key + "' must be a list");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw ManifestError(std::string("field '") + key +
                          "' must hold strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

ManifestRecord ParseRecord(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ManifestError("record must be an object");
  ManifestRecord r;
  r.id = StringField(j, "id", true);
  if (r.id.empty()) throw ManifestError("empty id");
  r.audio = StringField(j, "audio", true);
  r.reference = StringField(j, "reference", true);
  try {
    r.task = ParseScoreTask(StringField(j, "task", true));
  } catch (const ConfigError& e) {
    throw ManifestError(e.what());
  }
  r.languages = StringList(j, "languages");
  for (auto& f : StringList(j, "frames")) {
    r.frames.push_back(ResolvePath(base_dir, f));
  }
  switch (r.task) {
    case ScoreTask::kCsAsr:
      if (r.languages.size() != 2 || r.languages[0] == r.languages[1]) {
        throw ManifestError("cs_asr record needs two distinct languages");
      }
      break;
    case ScoreTask::kSt:
      if (r.languages.size() != 1) {
        throw ManifestError("st record needs exactly one target language");
      }
      break;
    case ScoreTask::kAsr:
      if (r.languages.size() > 1) {
        throw ManifestError("asr record takes at most one language");
      }
      break;
  }
  return r;
}

}  // namespace

Manifest Manifest::Parse(std::string_view text, const std::string& base_dir) {
  Manifest m;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        throw ManifestError(std::string("malformed JSON: ") + e.what());
      }
      auto rec = ParseRecord(j, base_dir);
      if (!seen.insert(rec.id).second) {
        throw ManifestError("duplicate id '" + rec.id + "'");
      }
      m.records.push_back(std::move(rec));
    } catch (const ManifestError& e) {
      throw ManifestError("manifest line " + std::to_string(line_no) + ": " +
                          e.what());
    }
  }
  if (m.records.empty()) throw ManifestError("manifest has no records");
  return m;
}

Manifest Manifest::Load(const std::string& path) {
  std::string text;
  try {
    text = ReadFileBytes(path);
  } catch (const Error& e) {
    throw ManifestError(e.what());
  }
  return Parse(text, DirectoryOf(path));
}

std::string Manifest::Digest() const {
  std::string all;
  for (const auto& r : records) all += r.ToJson().dump() + "\n";
  return Sha256Hex(all);
}

}  // namespace wprompt
