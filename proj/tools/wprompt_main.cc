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

// wprompt command line. Exit codes: 0 ok, 1 run errors, 2 bad config or
// manifest.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wprompt/backend_factory.h"
#include "wprompt/codec.h"
#include "wprompt/decoder.h"
#include "wprompt/errors.h"
#include "wprompt/manifest.h"
#include "wprompt/prompt_builder.h"
#include "wprompt/retrieval.h"
#include "wprompt/runner.h"
#include "wprompt/vocab_mask.h"

namespace {

using namespace wprompt;

constexpr int kExitOk = 0;
constexpr int kExitRunErrors = 1;
constexpr int kExitInvalid = 2;

std::vector<std::string> SplitList(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::vector<std::string> out;
  std::istringstream in(ReadFileBytes(path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

// "zh=0.95,en=0.05"
LidResult ParseLidFlag(const std::string& s) {
  std::vector<std::pair<std::string, double>> probs;
  for (const auto& item : SplitList(s)) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--lid expects code=prob");
    try {
      probs.emplace_back(item.substr(0, eq), std::stod(item.substr(eq + 1)));
    } catch (const std::logic_error&) {
      throw ConfigError("--lid: bad probability in '" + item + "'");
    }
  }
  return LidFromProbabilities(probs);
}

void WriteOut(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path);
}

struct PromptFlags {
  std::string vocab;
  std::string kind = "default";
  std::vector<std::string> languages;
  std::string task = "asr";
  std::string objects;
  std::string objects_file;
  int top_k = 50;
  std::string separator = ", ";
  double lid_threshold = 1.0;
  std::string lid;
  int budget = kDefaultPromptBudget;
  bool ids = false;
};

PromptSequence MakePrompt(const PromptFlags& f, const LoadedVocabulary& v) {
  const auto& sp = v.specials();
  auto lang = [&](std::size_t i) -> std::string {
    if (i >= f.languages.size()) throw ConfigError("missing --language");
    return f.languages[i];
  };
  if (f.kind == "default") {
    return BuildDefaultPrompt(sp, f.languages.empty() ? "en" : lang(0),
                              ParseTask(f.task));
  }
  if (f.kind == "visual") {
    std::vector<std::string> objects =
        f.objects_file.empty() ? SplitList(f.objects) : ReadLines(f.objects_file);
    VisualPromptConfig cfg;
    cfg.top_k = f.top_k;
    cfg.separator = f.separator;
    return BuildVisualPrompt(objects, cfg, f.languages.empty() ? "en" : lang(0),
                             *v.tokenizer, sp, f.budget);
  }
  if (f.kind == "concat") {
    ConcatConfig cfg;
    // zh/en unless given
    if (!f.languages.empty()) cfg.languages = {lang(0), lang(1)};
    cfg.lid_threshold = f.lid_threshold;
    if (f.lid.empty()) {
      if (!cfg.AlwaysConcat()) throw ConfigError("--lid needed below threshold 1");
      cfg.Validate(sp);
      PromptSequence p;
      p.languages = {cfg.languages[0], cfg.languages[1]};
      return p;
    }
    return BuildCsPrompt(ParseLidFlag(f.lid), cfg, sp);
  }
  if (f.kind == "st") return BuildStPrompt(sp, lang(0));
  throw ConfigError("unknown prompt kind: " + f.kind);
}

void AddPromptFlags(CLI::App* sub, PromptFlags& f) {
  sub->add_option("--vocab", f.vocab, "vocabulary manifest")->required();
  sub->add_option("--kind", f.kind, "default | visual | concat | st");
  sub->add_option("--language,-l", f.languages, "language code (repeatable)");
  sub->add_option("--task", f.task, "asr | st (default kind)");
  sub->add_option("--objects", f.objects, "comma separated object labels");
  sub->add_option("--objects-file", f.objects_file, "one label per line");
  sub->add_option("--top-k", f.top_k, "object labels to keep");
  sub->add_option("--separator", f.separator, "label separator");
  sub->add_option("--lid-threshold", f.lid_threshold, "concat LID threshold");
  sub->add_option("--lid", f.lid, "LID distribution, e.g. zh=0.9,en=0.1");
  sub->add_option("--budget", f.budget, "prompt token budget");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wprompt: prompt construction, constrained decoding and scoring"};
  app.require_subcommand(1);

  // build-prompt
  PromptFlags pf;
  auto* build_prompt = app.add_subcommand("build-prompt", "serialize a prompt");
  AddPromptFlags(build_prompt, pf);
  build_prompt->add_flag("--ids", pf.ids, "print token ids as well");

  // build-mask
  std::string mask_vocab, mask_script, mask_script_file, mask_corpus, mask_out;
  std::string mask_language;
  double mask_percent = 0.0;
  auto* build_mask = app.add_subcommand("build-mask", "build a vocabulary mask");
  build_mask->add_option("--vocab", mask_vocab, "vocabulary manifest")->required();
  build_mask->add_option("--script", mask_script, "cjk | cyrillic | arabic or a name in --script-file");
  build_mask->add_option("--script-file", mask_script_file, "script range config");
  build_mask->add_option("--frequency-corpus", mask_corpus, "training text");
  build_mask->add_option("--percent", mask_percent, "keep the top P% of token types");
  build_mask->add_option("--language", mask_language, "default percent lookup");
  build_mask->add_option("--out,-o", mask_out, "output file (default stdout)");

  // embed-index
  std::string ei_labels, ei_embeddings, ei_out;
  auto* embed_index = app.add_subcommand("embed-index", "build an object index");
  embed_index->add_option("--labels", ei_labels, "one label per line")->required();
  embed_index->add_option("--embeddings", ei_embeddings,
                          "embedding file keyed by label sentence")->required();
  embed_index->add_option("--out,-o", ei_out, "index file")->required();

  // retrieve
  std::string rt_index, rt_agg = "max";
  std::vector<std::string> rt_frames;
  int rt_top_k = 50, rt_frame_count = 3;
  auto* retrieve = app.add_subcommand("retrieve", "top-K object labels for frames");
  retrieve->add_option("--index", rt_index, "object index")->required();
  retrieve->add_option("--frames", rt_frames, "frame embedding file(s)")->required();
  retrieve->add_option("--top-k", rt_top_k, "labels to return");
  retrieve->add_option("--frame-count", rt_frame_count, "frames to sample");
  retrieve->add_option("--aggregation", rt_agg, "max | mean");

  // lid / transcribe share backend flags
  std::string be_vocab, be_spec, be_audio;
  std::vector<std::string> be_languages;
  auto* lid = app.add_subcommand("lid", "language identification");
  lid->add_option("--vocab", be_vocab, "vocabulary manifest")->required();
  lid->add_option("--backend", be_spec, "mock:<script> | exec:<cmd> | tcp:host:port")->required();
  lid->add_option("--audio", be_audio, "audio handle")->required();
  lid->add_option("--languages", be_languages, "allowed languages")->delimiter(',');

  PromptFlags tf;
  std::string tr_backend, tr_audio, tr_mask, tr_strategy = "greedy";
  int tr_max = 224, tr_beam = 1;
  auto* transcribe = app.add_subcommand("transcribe", "decode one utterance");
  AddPromptFlags(transcribe, tf);
  transcribe->add_option("--backend", tr_backend, "backend spec")->required();
  transcribe->add_option("--audio", tr_audio, "audio handle")->required();
  transcribe->add_option("--mask", tr_mask, "vocabulary mask file");
  transcribe->add_option("--max-new-tokens", tr_max, "generation limit");
  transcribe->add_option("--strategy", tr_strategy, "greedy | beam");
  transcribe->add_option("--beam-width", tr_beam, "beam width");

  std::string ev_manifest, ev_config, ev_output, ev_cache;
  int ev_workers = 0;
  auto add_eval_flags = [&](CLI::App* sub) {
    sub->add_option("--manifest,-m", ev_manifest, "JSONL manifest")->required();
    sub->add_option("--config,-c", ev_config, "run config (JSON)")->required();
    sub->add_option("--output-dir,-o", ev_output, "overrides output_dir");
    sub->add_option("--cache-dir", ev_cache, "overrides cache_dir");
    sub->add_option("--workers", ev_workers, "overrides workers");
  };
  auto* evaluate = app.add_subcommand("evaluate", "run a manifest and score it");
  add_eval_flags(evaluate);
  std::string sw_param, sw_values;
  auto* sweep = app.add_subcommand("sweep", "evaluate over parameter values");
  add_eval_flags(sweep);
  sweep->add_option("--param", sw_param, "top_k | lid_threshold | frequency_percent")->required();
  sweep->add_option("--values", sw_values, "comma separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  auto load_run = [&] {
    RunConfig cfg = RunConfig::Load(ev_config);
    if (!ev_output.empty()) cfg.output_dir = ev_output;
    if (!ev_cache.empty()) cfg.cache_dir = ev_cache;
    if (ev_workers > 0) cfg.workers = ev_workers;
    return cfg;
  };

  try {
    if (*build_prompt) {
      auto v = LoadVocabManifest(pf.vocab);
      auto tokens = SerializePrompt(MakePrompt(pf, v), v.specials(), pf.budget);
      std::cout << RenderTokens(tokens, *v.tokenizer, v.specials()) << "\n";
      if (pf.ids) {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
          std::cout << (i ? " " : "") << tokens[i];
        }
        std::cout << "\n";
      }
    } else if (*build_mask) {
      auto v = LoadVocabManifest(mask_vocab);
      std::optional<VocabMask> mask;
      if (!mask_corpus.empty()) {
        FrequencyMaskConfig fc;
        if (mask_percent > 0) {
          fc.percent = mask_percent;
        } else if (auto d = DefaultFrequencyPercent(mask_language)) {
          fc.percent = *d;
        } else {
          throw ConfigError("--percent is required");
        }
        fc.corpus = ReadFileBytes(mask_corpus);
        mask = BuildFrequencyMask(fc, *v.tokenizer, v.specials());
      } else if (!mask_script.empty()) {
        std::optional<ScriptSpec> spec;
        if (mask_script_file.empty()) {
          spec = NamedScript(mask_script);
        } else {
          for (auto& s : LoadScriptConfig(mask_script_file)) {
            if (s.name == mask_script) spec = s;
          }
        }
        if (!spec) throw ConfigError("unknown script: " + mask_script);
        mask = BuildScriptMask(*spec, *v.tokenizer, v.specials());
      } else {
        throw ConfigError("need --script or --frequency-corpus");
      }
      WriteOut(mask_out, mask->ToText());
      std::fprintf(stderr, "allowed %d of %d tokens\n", mask->CountAllowed(),
                   mask->size());
    } else if (*embed_index) {
      FileEmbeddingProvider provider(EmbeddingFile::Load(ei_embeddings));
      auto labels = ReadLines(ei_labels);
      BuildIndex(labels, provider).ToFile().Save(ei_out);
    } else if (*retrieve) {
      auto index = ObjectIndex::Load(rt_index);
      std::vector<EmbeddingVector> frames;
      for (const auto& path : rt_frames) {
        for (auto& r : EmbeddingFile::Load(path).records) {
          frames.push_back(std::move(r.values));
        }
      }
      if (frames.empty()) throw ConfigError("no frames");
      auto plan = PlanFrames(static_cast<int>(frames.size()), rt_frame_count);
      std::vector<EmbeddingVector> picked;
      for (int i : plan.indices) picked.push_back(frames[i]);
      for (const auto& s :
           Retrieve(picked, index, rt_top_k, ParseAggregation(rt_agg))) {
        std::printf("%s\t%.6f\n", s.label.c_str(), s.score);
      }
    } else if (*lid) {
      auto v = LoadVocabManifest(be_vocab);
      auto backend = MakeBackend(BackendSpec::Parse(be_spec), v);
      Decoder decoder(*backend, *v.tokenizer, v.specials());
      if (be_languages.empty()) {
        for (const auto& l : v.specials().languages) be_languages.push_back(l.code);
      }
      auto r = decoder.RunLid(AudioHandle{be_audio}, be_languages);
      for (const auto& [code, p] : r.probs) std::printf("%s\t%.6f\n", code.c_str(), p);
      std::printf("argmax\t%s\t%.6f\n", r.argmax.c_str(), r.confidence);
    } else if (*transcribe) {
      auto v = LoadVocabManifest(tf.vocab);
      auto backend = MakeBackend(BackendSpec::Parse(tr_backend), v);
      Decoder decoder(*backend, *v.tokenizer, v.specials());
      AudioHandle audio{tr_audio};
      PromptSequence prompt;
      if (tf.kind == "concat" && tf.lid.empty() && tf.lid_threshold < 1.0) {
        ConcatConfig cc;
        if (tf.languages.size() != 2) throw ConfigError("concat needs two --language");
        cc.languages = {tf.languages[0], tf.languages[1]};
        cc.lid_threshold = tf.lid_threshold;
        prompt = BuildCsPrompt(decoder.RunLid(audio, tf.languages), cc, v.specials());
      } else {
        prompt = MakePrompt(tf, v);
      }
      DecodeConfig dc;
      dc.max_new_tokens = tr_max;
      dc.beam_width = tr_beam;
      if (tr_strategy == "beam") {
        dc.strategy = SearchStrategy::kBeam;
      } else if (tr_strategy != "greedy") {
        throw ConfigError("unknown strategy: " + tr_strategy);
      }
      if (!tr_mask.empty()) dc.mask = VocabMask::Load(tr_mask);
      auto res = decoder.Decode(audio, prompt, dc);
      std::cerr << RenderTokens(SerializePrompt(prompt, v.specials(), tf.budget),
                                *v.tokenizer, v.specials())
                << "\n";
      std::cout << res.text << "\n";
    } else if (*evaluate) {
      auto manifest = Manifest::Load(ev_manifest);
      auto result = RunEval(manifest, load_run());
      std::cout << result.report.ToTable();
      for (const auto& f : result.report.failures) {
        std::cerr << "failed " << f.id << ": " << f.error << "\n";
      }
      std::cerr << "backend steps: " << result.stats.step_calls
                << "  cache hits: " << result.stats.hyp_hits << "/"
                << result.stats.hyp_hits + result.stats.hyp_misses << "\n";
      return result.report.failures.empty() ? kExitOk : kExitRunErrors;
    } else if (*sweep) {
      auto manifest = Manifest::Load(ev_manifest);
      SweepSpec spec;
      spec.param = ParseSweepParam(sw_param);
      for (const auto& s : SplitList(sw_values)) {
        try {
          std::size_t used = 0;
          spec.values.push_back(std::stod(s, &used));
          if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::logic_error&) {
          throw ConfigError("bad sweep value: " + s);
        }
      }
      auto result = RunSweep(manifest, load_run(), spec);
      std::cout << result.ToTable();
      bool failures = false;
      for (const auto& e : result.entries) failures |= !e.report.failures.empty();
      return failures ? kExitRunErrors : kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ManifestError& e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const PromptError& e) {
    std::cerr << "prompt error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRunErrors;
  }
  return kExitOk;
}
