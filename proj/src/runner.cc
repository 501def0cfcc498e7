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

#include "wprompt/runner.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "wprompt/codec.h"
#include "wprompt/errors.h"
#include "wprompt/hypothesis_cache.h"
#include "wprompt/text_normalizer.h"
#include "wprompt/vocab_mask.h"

namespace wprompt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Backend and decoder come up on first use, so a fully cached run never
// spawns or connects to anything.
class LazyDecoder {
 public:
  LazyDecoder(const BackendSpec& spec, const LoadedVocabulary& vocab)
      : spec_(spec), vocab_(vocab) {}

  const Decoder& Get() {
    std::call_once(once_, [&] {
      try {
        guarded_ = std::make_shared<GuardedBackend>(MakeBackend(spec_, vocab_));
        decoder_ = std::make_unique<Decoder>(*guarded_, *vocab_.tokenizer,
                                             vocab_.specials());
      } catch (const std::exception& e) {
        error_ = e.what();
        decoder_.reset();
      }
    });
    if (!decoder_) throw BackendError("backend unavailable: " + error_);
    return *decoder_;
  }

  bool started() const { return guarded_ != nullptr; }
  long long step_calls() const { return guarded_ ? guarded_->step_calls() : 0; }

 private:
  const BackendSpec& spec_;
  const LoadedVocabulary& vocab_;
  std::once_flag once_;
  std::shared_ptr<GuardedBackend> guarded_;
  std::unique_ptr<Decoder> decoder_;
  std::string error_;
};

struct Outcome {
  bool ok = false;
  std::string hypothesis;
  std::string prompt;
  std::string error;
};

std::optional<VocabMask> BuildMasks(const RunConfig& cfg,
                                    const LoadedVocabulary& vocab) {
  std::optional<VocabMask> out;
  for (const auto& spec : cfg.masks) {
    std::optional<VocabMask> m;
    switch (spec.kind) {
      case MaskSpec::Kind::kFile:
        m = VocabMask::Load(spec.file);
        break;
      case MaskSpec::Kind::kScript: {
        if (spec.script_file.empty()) {
          m = BuildScriptMask(*NamedScript(spec.script), *vocab.tokenizer,
                              vocab.specials());
          break;
        }
        bool found = false;
        for (const auto& s : LoadScriptConfig(spec.script_file)) {
          if (s.name != spec.script) continue;
          m = BuildScriptMask(s, *vocab.tokenizer, vocab.specials());
          found = true;
        }
        if (!found) {
          throw ConfigError("script '" + spec.script + "' not in " +
                            spec.script_file);
        }
        break;
      }
      case MaskSpec::Kind::kFrequency: {
        FrequencyMaskConfig fc;
        fc.percent = spec.percent ? *spec.percent
                                  : *DefaultFrequencyPercent(spec.language);
        fc.corpus = ReadFileBytes(spec.corpus_path);
        m = BuildFrequencyMask(fc, *vocab.tokenizer, vocab.specials());
        break;
      }
    }
    if (m->size() != vocab.vocab->size() || m->eot() != vocab.specials().eot) {
      throw ConfigError("mask does not match the vocabulary");
    }
    out = out ? Intersect(*out, *m) : *m;
  }
  return out;
}

std::vector<EmbeddingVector> LoadFrames(const ManifestRecord& rec, int dim) {
  std::vector<EmbeddingVector> frames;
  for (const auto& path : rec.frames) {
    auto file = EmbeddingFile::Load(path);
    if (file.dim != dim) {
      throw ConfigError("frame file " + path + " has dim " +
                        std::to_string(file.dim) + ", index has " +
                        std::to_string(dim));
    }
    for (auto& r : file.records) frames.push_back(std::move(r.values));
  }
  return frames;
}

class Evaluator {
 public:
  Evaluator(const Manifest& manifest, const RunConfig& cfg)
      : manifest_(manifest),
        cfg_(cfg),
        vocab_(LoadVocabManifest(cfg.vocab_path)),
        cache_(cfg.cache_dir),
        lazy_(cfg.backend, vocab_) {
    vocab_digest_ = Sha256File(cfg.vocab_path);
    backend_digest_ = cfg.backend.Digest() + "|" + cfg.backend_tag;
    decode_ = cfg.decode;
    decode_.mask = BuildMasks(cfg, vocab_);
    mask_digest_ = decode_.mask ? Sha256Hex(decode_.mask->ToText()) : "";
    if (cfg.policy == PolicyKind::kVisual) {
      index_.emplace(ObjectIndex::Load(cfg.visual.index_path));
    }
    const auto& sp = vocab_.specials();
    for (const auto& r : manifest.records) {
      for (const auto& l : r.languages) {
        if (!sp.HasLanguage(l)) {
          throw ManifestError("record '" + r.id + "': unknown language '" +
                              l + "'");
        }
      }
    }
    if (cfg.policy == PolicyKind::kConcat) {
      for (const auto& l : cfg.concat.languages) {
        if (!sp.HasLanguage(l)) throw ConfigError("unknown language: " + l);
      }
    }
  }

  RunResult Run() {
    const std::size_t n = manifest_.records.size();
    std::vector<Outcome> outcomes(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i; (i = next++) < n;) {
        outcomes[i] = Process(manifest_.records[i]);
      }
    };
    int workers = std::min<int>(cfg_.workers, static_cast<int>(n));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    // ordered reduce by id
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return manifest_.records[a].id < manifest_.records[b].id;
    });
    std::vector<ScoredPair> pairs;
    std::vector<std::string> prompts;
    std::vector<RecordFailure> failures;
    for (std::size_t i : order) {
      const auto& rec = manifest_.records[i];
      if (outcomes[i].ok) {
        pairs.push_back({rec.id, rec.reference, outcomes[i].hypothesis});
        prompts.push_back(outcomes[i].prompt);
      } else {
        failures.push_back({rec.id, outcomes[i].error});
      }
    }
    RunResult result;
    const ScoreTask task = manifest_.records.front().task;
    if (!pairs.empty()) {
      result.report = ScoreCorpus(pairs, task);
      for (std::size_t k = 0; k < prompts.size(); ++k) {
        result.report.utterances[k].prompt = prompts[k];
      }
    } else {
      result.report.task = task;
      result.report.metadata["normalization"] =
          std::string(kNormalizationVersion);
    }
    result.report.failures = std::move(failures);
    result.report.metadata["config_hash"] = ConfigHash(manifest_, cfg_);
    result.report.metadata["policy"] = PolicyName(cfg_.policy);
    result.stats.step_calls = lazy_.step_calls();
    result.stats.backend_started = lazy_.started();
    result.stats.hyp_hits = hyp_hits_;
    result.stats.hyp_misses = hyp_misses_;
    result.stats.lid_hits = lid_hits_;
    result.stats.lid_misses = lid_misses_;
    return result;
  }

 private:
  Outcome Process(const ManifestRecord& rec) {
    Outcome out;
    try {
      AudioHandle audio{rec.audio};
      PromptSequence prompt = BuildPrompt(rec, audio);
      auto tokens = SerializePrompt(prompt, vocab_.specials(), cfg_.prompt_budget);
      out.prompt = RenderTokens(tokens, *vocab_.tokenizer, vocab_.specials());
      json key{{"recipe", kHypothesisRecipe},
               {"id", rec.id},
               {"audio", rec.audio},
               {"backend", backend_digest_},
               {"vocab", vocab_digest_},
               {"prompt", tokens},
               {"mask", mask_digest_},
               {"decode",
                {{"max_new_tokens", decode_.max_new_tokens},
                 {"strategy", StrategyName(decode_.strategy)},
                 {"beam_width", decode_.beam_width}}}};
      const std::string k = HypothesisCache::KeyOf(key);
      if (auto hit = cache_.Get("hyp", k);
          hit && hit->contains("text") && (*hit)["text"].is_string()) {
        ++hyp_hits_;
        out.hypothesis = (*hit)["text"].get<std::string>();
      } else {
        ++hyp_misses_;
        auto res = lazy_.Get().Decode(audio, prompt, decode_);
        out.hypothesis = res.text;
        cache_.Put("hyp", k, json{{"tokens", res.tokens}, {"text", res.text}});
      }
      out.ok = true;
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
    return out;
  }

  LidResult Lid(const AudioHandle& audio, std::vector<std::string> allowed) {
    json key{{"recipe", kLidRecipe},
             {"audio", audio.ref},
             {"backend", backend_digest_},
             {"vocab", vocab_digest_},
             {"languages", allowed}};
    const std::string k = HypothesisCache::KeyOf(key);
    if (auto hit = cache_.Get("lid", k)) {
      try {
        LidResult r;
        for (const auto& p : (*hit)["probs"]) {
          r.probs.emplace_back(p[0].get<std::string>(), p[1].get<double>());
        }
        r.argmax = (*hit)["argmax"].get<std::string>();
        r.confidence = (*hit)["confidence"].get<double>();
        ++lid_hits_;
        return r;
      } catch (const json::exception&) {
        // fall through and recompute
      }
    }
    ++lid_misses_;
    LidResult r = lazy_.Get().RunLid(audio, allowed);
    json probs = json::array();
    for (const auto& [code, p] : r.probs) probs.push_back(json::array({code, p}));
    cache_.Put("lid", k,
               json{{"probs", probs},
                    {"argmax", r.argmax},
                    {"confidence", r.confidence}});
    return r;
  }

  PromptSequence CsPrompt(const ManifestRecord& rec, const AudioHandle& audio,
                          std::vector<std::string> languages,
                          double threshold) {
    ConcatConfig cc;
    cc.languages = {languages[0], languages[1]};
    cc.lid_threshold = threshold;
    // always-concat needs no LID at all
    if (cc.AlwaysConcat()) {
      cc.Validate(vocab_.specials());
      PromptSequence p;
      p.languages = languages;
      return p;
    }
    (void)rec;
    return BuildCsPrompt(Lid(audio, languages), cc, vocab_.specials());
  }

  PromptSequence BuildPrompt(const ManifestRecord& rec,
                             const AudioHandle& audio) {
    const auto& sp = vocab_.specials();
    switch (cfg_.policy) {
      case PolicyKind::kDefault:
        switch (rec.task) {
          case ScoreTask::kCsAsr:
            // baseline: LID picks one of the two languages
            return CsPrompt(rec, audio, rec.languages, 0.0);
          case ScoreTask::kSt:
            return BuildDefaultPrompt(sp, rec.languages[0], Task::kSt);
          case ScoreTask::kAsr:
            return BuildDefaultPrompt(
                sp, rec.languages.empty() ? "en" : rec.languages[0], Task::kAsr);
        }
        break;
      case PolicyKind::kVisual: {
        std::string lang = cfg_.visual.language;
        if (lang.empty()) lang = rec.languages.empty() ? "en" : rec.languages[0];
        auto frames = LoadFrames(rec, index_->dim());
        if (frames.empty()) return BuildDefaultPrompt(sp, lang, Task::kAsr);
        auto plan = PlanFrames(static_cast<int>(frames.size()),
                               cfg_.visual.frame_count);
        std::vector<EmbeddingVector> picked;
        for (int i : plan.indices) picked.push_back(frames[i]);
        auto scored = Retrieve(picked, *index_, cfg_.visual.prompt.top_k,
                               cfg_.visual.aggregation);
        std::vector<std::string> labels;
        for (auto& s : scored) labels.push_back(std::move(s.label));
        return BuildVisualPrompt(labels, cfg_.visual.prompt, lang,
                                 *vocab_.tokenizer, sp, cfg_.prompt_budget);
      }
      case PolicyKind::kConcat:
        return CsPrompt(rec, audio,
                        cfg_.concat.languages.empty() ? rec.languages
                                                      : cfg_.concat.languages,
                        cfg_.concat.lid_threshold);
      case PolicyKind::kSt:
        return BuildStPrompt(sp, rec.languages[0]);
    }
    throw ConfigError("unhandled policy");
  }

  const Manifest& manifest_;
  const RunConfig& cfg_;
  LoadedVocabulary vocab_;
  HypothesisCache cache_;
  LazyDecoder lazy_;
  std::string vocab_digest_;
  std::string backend_digest_;
  std::string mask_digest_;
  DecodeConfig decode_;
  std::optional<ObjectIndex> index_;
  std::atomic<int> hyp_hits_{0}, hyp_misses_{0}, lid_hits_{0}, lid_misses_{0};
};

void WriteAtomically(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

std::string ConfigHash(const Manifest& manifest, const RunConfig& cfg) {
  json j{{"config", cfg.Fingerprint()}, {"manifest", manifest.Digest()}};
  return Sha256Hex(j.dump());
}

void WriteReport(const EvalReport& report, const std::string& dir) {
  fs::create_directories(dir);
  WriteAtomically(fs::path(dir) / "report.json", report.ToJson().dump(2) + "\n");
  WriteAtomically(fs::path(dir) / "report.txt", report.ToTable());
}

RunResult RunEval(const Manifest& manifest, const RunConfig& cfg) {
  if (manifest.records.empty()) throw ManifestError("manifest has no records");
  const ScoreTask task = manifest.records.front().task;
  for (const auto& r : manifest.records) {
    if (r.task != task) {
      throw ManifestError("mixed tasks in one manifest ('" + r.id + "')");
    }
  }
  cfg.CheckTask(task);
  std::optional<Evaluator> ev;
  try {
    ev.emplace(manifest, cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const ManifestError&) {
    throw;
  } catch (const Error& e) {
    // unreadable vocab / mask / index files
    throw ConfigError(e.what());
  }
  RunResult result = ev->Run();
  if (!cfg.output_dir.empty()) WriteReport(result.report, cfg.output_dir);
  return result;
}

const char* SweepParamName(SweepParam p) {
  switch (p) {
    case SweepParam::kTopK:
      return "top_k";
    case SweepParam::kLidThreshold:
      return "lid_threshold";
    case SweepParam::kFrequencyPercent:
      return "frequency_percent";
  }
  return "?";
}

SweepParam ParseSweepParam(std::string_view name) {
  if (name == "top_k") return SweepParam::kTopK;
  if (name == "lid_threshold") return SweepParam::kLidThreshold;
  if (name == "frequency_percent") return SweepParam::kFrequencyPercent;
  throw ConfigError("unknown sweep parameter: " + std::string(name));
}

void SweepSpec::Validate() const {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  for (double v : values) {
    bool ok = std::isfinite(v);
    switch (param) {
      case SweepParam::kTopK:
        ok = ok && v >= 1 && v == std::floor(v) && v <= 1e6;
        break;
      case SweepParam::kLidThreshold:
        ok = ok && v >= 0.0 && v <= 1.0;
        break;
      case SweepParam::kFrequencyPercent:
        ok = ok && v > 0.0 && v <= 100.0;
        break;
    }
    if (!ok) {
      throw ConfigError(std::string("invalid value ") + FormatValue(v) +
                        " for " + SweepParamName(param));
    }
  }
}

RunConfig SweepSpec::Apply(const RunConfig& cfg, double value) const {
  RunConfig out = cfg;
  switch (param) {
    case SweepParam::kTopK:
      if (cfg.policy != PolicyKind::kVisual) {
        throw ConfigError("top_k sweep needs the visual policy");
      }
      out.visual.prompt.top_k = static_cast<int>(value);
      break;
    case SweepParam::kLidThreshold:
      if (cfg.policy != PolicyKind::kConcat) {
        throw ConfigError("lid_threshold sweep needs the concat policy");
      }
      out.concat.lid_threshold = value;
      break;
    case SweepParam::kFrequencyPercent: {
      bool any = false;
      for (auto& m : out.masks) {
        if (m.kind != MaskSpec::Kind::kFrequency) continue;
        m.percent = value;
        any = true;
      }
      if (!any) throw ConfigError("frequency_percent sweep needs a frequency mask");
      break;
    }
  }
  return out;
}

std::string FormatValue(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::optional<double> RankingMetric(const EvalReport& report) {
  if (report.task == ScoreTask::kSt) return report.corpus_bleu;
  return report.total_mer;
}

SweepResult RunSweep(const Manifest& manifest, const RunConfig& cfg,
                     const SweepSpec& sweep) {
  sweep.Validate();
  // check every value up front so a bad config fails before any run
  for (double v : sweep.values) (void)sweep.Apply(cfg, v);
  SweepResult result;
  result.param = sweep.param;
  HypothesisCache cache(cfg.cache_dir);
  for (double v : sweep.values) {
    RunConfig run_cfg = sweep.Apply(cfg, v);
    if (!cfg.output_dir.empty()) {
      run_cfg.output_dir = (fs::path(cfg.output_dir) /
                            (std::string(SweepParamName(sweep.param)) + "=" +
                             FormatValue(v)))
                               .string();
    }
    RunResult r = RunEval(manifest, run_cfg);
    SweepEntry e;
    e.value = v;
    e.report = std::move(r.report);
    e.stats = r.stats;
    e.cache_entries = cache.Count("hyp");
    result.entries.push_back(std::move(e));
  }

  const bool higher_better = manifest.records.front().task == ScoreTask::kSt;
  for (std::size_t i = 0; i < result.entries.size(); ++i) result.ranking.push_back(i);
  std::stable_sort(result.ranking.begin(), result.ranking.end(),
                   [&](std::size_t a, std::size_t b) {
                     auto ma = RankingMetric(result.entries[a].report);
                     auto mb = RankingMetric(result.entries[b].report);
                     if (!ma || !mb) return ma.has_value() && !mb.has_value();
                     return higher_better ? *ma > *mb : *ma < *mb;
                   });
  double sum = 0.0;
  int counted = 0;
  EditStats pooled;
  for (std::size_t i : result.ranking) {
    if (counted == 3) break;
    const auto& rep = result.entries[i].report;
    auto m = RankingMetric(rep);
    if (!m) break;
    result.top_values.push_back(result.entries[i].value);
    sum += *m;
    pooled += rep.total_stats;
    ++counted;
  }
  if (counted > 0) {
    result.top_mean = sum / counted;
    if (!higher_better) result.top_pooled = 100.0 * pooled.rate();
  }

  if (!cfg.output_dir.empty()) {
    fs::create_directories(cfg.output_dir);
    WriteAtomically(fs::path(cfg.output_dir) / "sweep.json",
                    result.ToJson().dump(2) + "\n");
    WriteAtomically(fs::path(cfg.output_dir) / "sweep.txt", result.ToTable());
  }
  return result;
}

json SweepResult::ToJson() const {
  json entries_j = json::array();
  for (const auto& e : entries) {
    auto m = RankingMetric(e.report);
    entries_j.push_back({{"value", e.value},
                         {"metric", m ? json(*m) : json(nullptr)},
                         {"failures", e.report.failures.size()},
                         {"config_hash", e.report.metadata.value("config_hash", "")}});
  }
  json rank = json::array();
  for (std::size_t i : ranking) rank.push_back(entries[i].value);
  return json{{"param", SweepParamName(param)},
              {"entries", entries_j},
              {"ranking", rank},
              {"top_values", top_values},
              {"top_mean", top_mean ? json(*top_mean) : json(nullptr)},
              {"top_pooled", top_pooled ? json(*top_pooled) : json(nullptr)}};
}

std::string SweepResult::ToTable() const {
  std::ostringstream out;
  const bool st = !entries.empty() && entries[0].report.task == ScoreTask::kSt;
  char line[160];
  std::snprintf(line, sizeof(line), "%-5s %-18s %10s %9s\n", "rank",
                SweepParamName(param), st ? "BLEU" : "Total MER", "failures");
  out << line;
  int rank = 1;
  for (std::size_t i : ranking) {
    const auto& e = entries[i];
    auto m = RankingMetric(e.report);
    char cell[32] = "-";
    if (m) std::snprintf(cell, sizeof(cell), "%.2f", *m);
    std::snprintf(line, sizeof(line), "%-5d %-18s %10s %9zu\n", rank++,
                  FormatValue(e.value).c_str(), cell, e.report.failures.size());
    out << line;
  }
  out << "top-3:";
  for (double v : top_values) out << ' ' << FormatValue(v);
  if (top_mean) {
    std::snprintf(line, sizeof(line), "  mean %.2f", *top_mean);
    out << line;
  }
  if (top_pooled) {
    std::snprintf(line, sizeof(line), "  pooled %.2f", *top_pooled);
    out << line;
  }
  out << "\n";
  return out.str();
}

}  // namespace wprompt
