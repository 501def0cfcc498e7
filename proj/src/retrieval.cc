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

#include "wprompt/retrieval.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "wprompt/codec.h"
#include "wprompt/errors.h"

namespace wprompt {
namespace {

static_assert(std::endian::native == std::endian::little,
              "embedding files are little-endian");

std::string PackFloats(std::span<const float> values) {
  std::string bytes(values.size() * sizeof(float), '\0');
  std::memcpy(bytes.data(), values.data(), bytes.size());
  return bytes;
}

}  // namespace

EmbeddingVector NormalizeL2(std::span<const float> v) {
  double sum = 0.0;
  for (float x : v) sum += static_cast<double>(x) * x;
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw ConfigError("cannot normalize a zero or non-finite embedding");
  }
  const double norm = std::sqrt(sum);
  EmbeddingVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<float>(v[i] / norm);
  }
  return out;
}

EmbeddingFile EmbeddingFile::Parse(std::string_view text) {
  EmbeddingFile file;
  std::size_t pos = text.find('\n');
  std::string header(text.substr(0, pos));
  if (!header.empty() && header.back() == '\r') header.pop_back();
  std::istringstream hs(header);
  std::string dim_kw, count_kw, extra;
  long long dim = 0, count = -1;
  if (!(hs >> dim_kw >> dim >> count_kw >> count) || dim_kw != "dim" ||
      count_kw != "count" || (hs >> extra) || dim <= 0 || count < 0) {
    throw ConfigError("embedding file: expected header 'dim D count C'");
  }
  file.dim = static_cast<int>(dim);
  std::set<std::string> seen;
  std::size_t line_no = 1;
  while (pos != std::string_view::npos && pos + 1 < text.size()) {
    std::size_t start = pos + 1;
    pos = text.find('\n', start);
    std::string_view line = text.substr(
        start, pos == std::string_view::npos ? std::string_view::npos
                                             : pos - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      return ConfigError("embedding file line " + std::to_string(line_no) +
                         ": " + why);
    };
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw fail("expected 'label<TAB>base64'");
    }
    std::string label(line.substr(0, tab));
    auto bytes = Base64Decode(line.substr(tab + 1));
    if (!bytes) throw fail("malformed base64");
    if (bytes->size() != static_cast<std::size_t>(dim) * sizeof(float)) {
      throw fail("dimension mismatch: expected " + std::to_string(dim) +
                 " floats");
    }
    if (!seen.insert(label).second) throw fail("duplicate label: " + label);
    EmbeddingVector values(static_cast<std::size_t>(dim));
    std::memcpy(values.data(), bytes->data(), bytes->size());
    file.records.push_back({std::move(label), std::move(values)});
  }
  if (file.records.size() != static_cast<std::size_t>(count)) {
    throw ConfigError("embedding file: header declares " +
                      std::to_string(count) + " records, found " +
                      std::to_string(file.records.size()));
  }
  return file;
}

EmbeddingFile EmbeddingFile::Load(const std::string& path) {
  return Parse(ReadFileBytes(path));
}

std::string EmbeddingFile::Format() const {
  std::ostringstream out;
  out << "dim " << dim << " count " << records.size() << "\n";
  for (const auto& record : records) {
    if (record.label.find_first_of("\t\n\r") != std::string::npos) {
      throw ConfigError("label contains a tab or newline: " + record.label);
    }
    if (record.values.size() != static_cast<std::size_t>(dim)) {
      throw ConfigError("dimension mismatch for label " + record.label);
    }
    out << record.label << "\t" << Base64Encode(PackFloats(record.values))
        << "\n";
  }
  return out.str();
}

void EmbeddingFile::Save(const std::string& path) const {
  std::string text = Format();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

FileEmbeddingProvider::FileEmbeddingProvider(const EmbeddingFile& file) {
  for (const auto& record : file.records) {
    by_text_.emplace(record.label, record.values);
  }
}

EmbeddingVector FileEmbeddingProvider::Embed(const std::string& text) {
  auto it = by_text_.find(text);
  if (it == by_text_.end()) {
    throw Error("embedding provider has no vector for: " + text);
  }
  return it->second;
}

std::string LabelSentence(const std::string& label) {
  return "This is a photo of a " + label;
}

ObjectIndex::ObjectIndex(int dim, std::vector<std::string> labels,
                         std::vector<EmbeddingVector> embeddings)
    : dim_(dim), labels_(std::move(labels)) {
  if (dim_ <= 0) throw ConfigError("index dimension must be positive");
  if (labels_.empty()) throw ConfigError("object index needs labels");
  if (labels_.size() != embeddings.size()) {
    throw ConfigError("label and embedding counts differ");
  }
  std::set<std::string> seen;
  data_.reserve(labels_.size() * dim_);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!seen.insert(labels_[i]).second) {
      throw ConfigError("duplicate label: " + labels_[i]);
    }
    if (embeddings[i].size() != static_cast<std::size_t>(dim_)) {
      throw ConfigError("dimension mismatch for label " + labels_[i]);
    }
    EmbeddingVector unit = NormalizeL2(embeddings[i]);
    data_.insert(data_.end(), unit.begin(), unit.end());
  }
}

ObjectIndex ObjectIndex::FromFile(const EmbeddingFile& file) {
  std::vector<std::string> labels;
  std::vector<EmbeddingVector> embeddings;
  for (const auto& record : file.records) {
    labels.push_back(record.label);
    embeddings.push_back(record.values);
  }
  return ObjectIndex(file.dim, std::move(labels), std::move(embeddings));
}

ObjectIndex ObjectIndex::Load(const std::string& path) {
  return FromFile(EmbeddingFile::Load(path));
}

EmbeddingFile ObjectIndex::ToFile() const {
  EmbeddingFile file;
  file.dim = dim_;
  for (std::size_t i = 0; i < size(); ++i) {
    auto e = embedding(i);
    file.records.push_back({labels_[i], EmbeddingVector(e.begin(), e.end())});
  }
  return file;
}

ObjectIndex BuildIndex(std::span<const std::string> labels,
                       EmbeddingProvider& provider) {
  if (labels.empty()) throw ConfigError("object index needs labels");
  std::vector<std::string> names(labels.begin(), labels.end());
  std::vector<EmbeddingVector> embeddings;
  embeddings.reserve(labels.size());
  int dim = -1;
  for (const auto& label : labels) {
    EmbeddingVector v = provider.Embed(LabelSentence(label));
    if (dim < 0) dim = static_cast<int>(v.size());
    if (v.empty() || static_cast<int>(v.size()) != dim) {
      throw ConfigError("embedding provider returned dimension " +
                        std::to_string(v.size()) + " for '" + label +
                        "', expected " + std::to_string(dim));
    }
    embeddings.push_back(std::move(v));
  }
  return ObjectIndex(dim, std::move(names), std::move(embeddings));
}

FramePlan PlanFrames(int video_length, int frame_count) {
  if (video_length < 1 || frame_count < 1) {
    throw ConfigError("frame plan needs video_length >= 1 and frame_count >= 1");
  }
  FramePlan plan;
  plan.video_length = video_length;
  const double last = video_length - 1;
  if (frame_count == 1) {
    plan.indices.push_back(static_cast<int>(std::lround(last / 2.0)));
    return plan;
  }
  for (int i = 0; i < frame_count; ++i) {
    int idx = static_cast<int>(std::lround(i * last / (frame_count - 1)));
    if (plan.indices.empty() || plan.indices.back() != idx) {
      plan.indices.push_back(idx);
    }
  }
  return plan;
}

std::vector<ScoredLabel> Retrieve(std::span<const EmbeddingVector> frames,
                                  const ObjectIndex& index, int top_k,
                                  FrameAggregation aggregation) {
  if (frames.empty()) throw ConfigError("retrieval needs at least one frame");
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
  std::vector<EmbeddingVector> units;
  units.reserve(frames.size());
  for (const auto& frame : frames) {
    if (frame.size() != static_cast<std::size_t>(index.dim())) {
      throw ConfigError("frame embedding dimension " +
                        std::to_string(frame.size()) + " != index dimension " +
                        std::to_string(index.dim()));
    }
    units.push_back(NormalizeL2(frame));
  }

  std::vector<double> scores(index.size());
  for (std::size_t e = 0; e < index.size(); ++e) {
    auto entry = index.embedding(e);
    double agg = aggregation == FrameAggregation::kMax ? -INFINITY : 0.0;
    for (const auto& frame : units) {
      double dot = 0.0;
      for (int d = 0; d < index.dim(); ++d) {
        dot += static_cast<double>(entry[d]) * frame[d];
      }
      if (aggregation == FrameAggregation::kMax) {
        agg = std::max(agg, dot);
      } else {
        agg += dot;
      }
    }
    if (aggregation == FrameAggregation::kMean) agg /= units.size();
    scores[e] = std::clamp(agg, -1.0, 1.0);
  }

  std::vector<std::size_t> order(index.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t k = std::min(order.size(), static_cast<std::size_t>(top_k));
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  std::vector<ScoredLabel> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back({index.label(order[i]), scores[order[i]]});
  }
  return out;
}

const char* AggregationName(FrameAggregation aggregation) {
  return aggregation == FrameAggregation::kMax ? "max" : "mean";
}

FrameAggregation ParseAggregation(std::string_view name) {
  if (name == "max") return FrameAggregation::kMax;
  if (name == "mean") return FrameAggregation::kMean;
  throw ConfigError("unknown frame aggregation: " + std::string(name));
}

}  // namespace wprompt
