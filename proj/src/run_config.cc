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

#include "wprompt/run_config.h"

#include "wprompt/codec.h"
#include "wprompt/errors.h"
#include "wprompt/manifest.h"

namespace wprompt {

using nlohmann::json;

const char* PolicyName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kDefault:
      return "default";
    case PolicyKind::kVisual:
      return "visual";
    case PolicyKind::kConcat:
      return "concat";
    case PolicyKind::kSt:
      return "st";
  }
  return "?";
}

namespace {

void CheckKeys(const json& j, std::initializer_list<const char*> keys,
               const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
T Get(const json& j, const char* key, T fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": bad value for '" + key + "'");
  }
}

std::string FileDigest(const std::string& path) {
  if (path.empty()) return "";
  try {
    return Sha256File(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

MaskSpec ParseMask(const json& j, const std::string& base) {
  if (!j.is_object()) throw ConfigError("mask: expected an object");
  CheckKeys(j, {"script", "script_file", "frequency_corpus", "percent",
                "language", "file"},
            "mask");
  MaskSpec m;
  if (j.contains("file")) {
    m.kind = MaskSpec::Kind::kFile;
    m.file = ResolvePath(base, Get<std::string>(j, "file", "", "mask"));
  } else if (j.contains("frequency_corpus")) {
    m.kind = MaskSpec::Kind::kFrequency;
    m.corpus_path =
        ResolvePath(base, Get<std::string>(j, "frequency_corpus", "", "mask"));
    if (j.contains("percent") && !j["percent"].is_null()) {
      m.percent = Get<double>(j, "percent", 0.0, "mask");
    }
    m.language = Get<std::string>(j, "language", "", "mask");
    if (!m.percent && !DefaultFrequencyPercent(m.language)) {
      throw ConfigError("mask: frequency mask needs 'percent'");
    }
    double p = m.percent ? *m.percent : *DefaultFrequencyPercent(m.language);
    if (!(p > 0.0 && p <= 100.0)) {
      throw ConfigError("mask: percent must be in (0, 100]");
    }
  } else if (j.contains("script")) {
    m.kind = MaskSpec::Kind::kScript;
    m.script = Get<std::string>(j, "script", "", "mask");
    if (j.contains("script_file")) {
      m.script_file =
          ResolvePath(base, Get<std::string>(j, "script_file", "", "mask"));
    } else if (!NamedScript(m.script)) {
      throw ConfigError("mask: unknown script '" + m.script + "'");
    }
  } else {
    throw ConfigError("mask: need one of script, frequency_corpus, file");
  }
  return m;
}

}  // namespace

json MaskSpec::ToJson() const {
  switch (kind) {
    case Kind::kScript:
      return json{{"script", script},
                  {"script_file", FileDigest(script_file)}};
    case Kind::kFrequency:
      return json{{"frequency_corpus", FileDigest(corpus_path)},
                  {"percent", percent ? json(*percent) : json(nullptr)},
                  {"language", language}};
    case Kind::kFile:
      return json{{"file", FileDigest(file)}};
  }
  return {};
}

RunConfig RunConfig::FromJson(const json& j, const std::string& base) {
  if (!j.is_object()) throw ConfigError("config: expected an object");
  CheckKeys(j, {"vocab", "backend", "backend_tag", "policy", "mask", "decode",
                "output_dir", "cache_dir", "workers", "prompt_budget"},
            "config");
  RunConfig c;
  c.vocab_path = ResolvePath(base, Get<std::string>(j, "vocab", "", "config"));
  if (c.vocab_path.empty()) throw ConfigError("config: 'vocab' is required");
  auto backend = Get<std::string>(j, "backend", "", "config");
  if (backend.empty()) throw ConfigError("config: 'backend' is required");
  try {
    c.backend = BackendSpec::Parse(backend, base);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  c.backend_tag = Get<std::string>(j, "backend_tag", "", "config");

  json policy = j.value("policy", json{{"kind", "default"}});
  if (!policy.is_object()) throw ConfigError("policy: expected an object");
  auto kind = Get<std::string>(policy, "kind", "default", "policy");
  if (kind == "default") {
    CheckKeys(policy, {"kind"}, "policy");
    c.policy = PolicyKind::kDefault;
  } else if (kind == "visual") {
    CheckKeys(policy, {"kind", "top_k", "separator", "frame_count",
                       "aggregation", "index", "language"},
              "policy");
    c.policy = PolicyKind::kVisual;
    c.visual.prompt.top_k = Get<int>(policy, "top_k", 50, "policy");
    c.visual.prompt.separator =
        Get<std::string>(policy, "separator", ", ", "policy");
    c.visual.frame_count = Get<int>(policy, "frame_count", 3, "policy");
    try {
      c.visual.aggregation = ParseAggregation(
          Get<std::string>(policy, "aggregation", "max", "policy"));
    } catch (const Error& e) {
      throw ConfigError(std::string("policy: ") + e.what());
    }
    c.visual.index_path =
        ResolvePath(base, Get<std::string>(policy, "index", "", "policy"));
    c.visual.language = Get<std::string>(policy, "language", "", "policy");
    if (c.visual.prompt.top_k < 1) throw ConfigError("policy: top_k must be >= 1");
    if (c.visual.frame_count < 1) {
      throw ConfigError("policy: frame_count must be >= 1");
    }
    if (c.visual.index_path.empty()) throw ConfigError("policy: 'index' is required");
  } else if (kind == "concat") {
    CheckKeys(policy, {"kind", "languages", "lid_threshold"}, "policy");
    c.policy = PolicyKind::kConcat;
    c.concat.languages = Get<std::vector<std::string>>(
        policy, "languages", {}, "policy");
    c.concat.lid_threshold = Get<double>(policy, "lid_threshold", 1.0, "policy");
    if (!c.concat.languages.empty() && c.concat.languages.size() != 2) {
      throw ConfigError("policy: concat needs exactly two languages");
    }
    if (!(c.concat.lid_threshold >= 0.0 && c.concat.lid_threshold <= 1.0)) {
      throw ConfigError("policy: lid_threshold must be in [0, 1]");
    }
  } else if (kind == "st") {
    CheckKeys(policy, {"kind"}, "policy");
    c.policy = PolicyKind::kSt;
  } else {
    throw ConfigError("policy: unknown kind '" + kind + "'");
  }

  if (j.contains("mask") && !j["mask"].is_null()) {
    const json& mask = j["mask"];
    if (mask.is_array()) {
      for (const auto& m : mask) c.masks.push_back(ParseMask(m, base));
    } else {
      c.masks.push_back(ParseMask(mask, base));
    }
  }

  if (j.contains("decode")) {
    const json& d = j["decode"];
    if (!d.is_object()) throw ConfigError("decode: expected an object");
    CheckKeys(d, {"max_new_tokens", "strategy", "beam_width"}, "decode");
    c.decode.max_new_tokens = Get<int>(d, "max_new_tokens", 224, "decode");
    auto strategy = Get<std::string>(d, "strategy", "greedy", "decode");
    if (strategy == "greedy") {
      c.decode.strategy = SearchStrategy::kGreedy;
    } else if (strategy == "beam") {
      c.decode.strategy = SearchStrategy::kBeam;
    } else {
      throw ConfigError("decode: unknown strategy '" + strategy + "'");
    }
    c.decode.beam_width = Get<int>(d, "beam_width", 1, "decode");
    if (c.decode.max_new_tokens < 0) {
      throw ConfigError("decode: max_new_tokens must be >= 0");
    }
    if (c.decode.beam_width < 1) throw ConfigError("decode: beam_width must be >= 1");
  }

  c.output_dir = ResolvePath(base, Get<std::string>(j, "output_dir", "", "config"));
  c.cache_dir = ResolvePath(base, Get<std::string>(j, "cache_dir", "", "config"));
  c.workers = Get<int>(j, "workers", 1, "config");
  if (c.workers < 1) throw ConfigError("config: workers must be >= 1");
  c.prompt_budget =
      Get<int>(j, "prompt_budget", kDefaultPromptBudget, "config");
  if (c.prompt_budget < 4) throw ConfigError("config: prompt_budget too small");
  return c;
}

RunConfig RunConfig::Load(const std::string& path) {
  json j;
  try {
    j = json::parse(ReadFileBytes(path));
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return FromJson(j, DirectoryOf(path));
}

void RunConfig::CheckTask(ScoreTask task) const {
  auto bad = [&] {
    return ConfigError(std::string("policy '") + PolicyName(policy) +
                       "' does not fit task '" + ScoreTaskName(task) + "'");
  };
  switch (policy) {
    case PolicyKind::kDefault:
      return;
    case PolicyKind::kVisual:
      if (task != ScoreTask::kAsr) throw bad();
      return;
    case PolicyKind::kConcat:
      if (task != ScoreTask::kCsAsr) throw bad();
      return;
    case PolicyKind::kSt:
      if (task != ScoreTask::kSt) throw bad();
      return;
  }
}

json RunConfig::Fingerprint() const {
  json policy_j{{"kind", PolicyName(policy)}};
  if (policy == PolicyKind::kVisual) {
    policy_j["top_k"] = visual.prompt.top_k;
    policy_j["separator"] = visual.prompt.separator;
    policy_j["frame_count"] = visual.frame_count;
    policy_j["aggregation"] = AggregationName(visual.aggregation);
    policy_j["index"] = FileDigest(visual.index_path);
    policy_j["language"] = visual.language;
  } else if (policy == PolicyKind::kConcat) {
    policy_j["languages"] = concat.languages;
    policy_j["lid_threshold"] = concat.lid_threshold;
  }
  json masks_j = json::array();
  for (const auto& m : masks) masks_j.push_back(m.ToJson());
  return json{{"vocab", FileDigest(vocab_path)},
              {"backend", backend.Digest()},
              {"backend_tag", backend_tag},
              {"policy", policy_j},
              {"mask", masks_j},
              {"decode",
               {{"max_new_tokens", decode.max_new_tokens},
                {"strategy", StrategyName(decode.strategy)},
                {"beam_width", decode.beam_width}}},
              {"prompt_budget", prompt_budget}};
}

}  // namespace wprompt
