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

#ifndef WPROMPT_MANIFEST_H_
#define WPROMPT_MANIFEST_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wprompt/scoring.h"

namespace wprompt {

// One JSON object per line:
//   {"id": ..., "audio": ..., "reference": ..., "task": "asr|cs_asr|st",
//    "languages": [...], "frames": ["emb file", ...]}
// languages: cs_asr needs exactly 2, st exactly 1 (the target), asr 0 or 1.
// frames are embedding files (see EmbeddingFile); their records are
// concatenated in order to form the video's frame sequence.
struct ManifestRecord {
  std::string id;
  std::string audio;
  std::string reference;
  ScoreTask task = ScoreTask::kAsr;
  std::vector<std::string> languages;
  std::vector<std::string> frames;  // resolved paths

  nlohmann::json ToJson() const;
};

struct Manifest {
  std::vector<ManifestRecord> records;

  // Relative frame paths resolve against base_dir.
  static Manifest Parse(std::string_view text, const std::string& base_dir = "");
  static Manifest Load(const std::string& path);

  // sha256 over the records' canonical JSON, one per line, in file order.
  std::string Digest() const;
};

// Joins base_dir and path unless path is absolute or base_dir empty.
std::string ResolvePath(const std::string& base_dir, const std::string& path);
std::string DirectoryOf(const std::string& path);

}  // namespace wprompt

#endif  // WPROMPT_MANIFEST_H_
