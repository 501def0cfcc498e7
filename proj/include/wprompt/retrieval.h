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

#ifndef WPROMPT_RETRIEVAL_H_
#define WPROMPT_RETRIEVAL_H_

#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace wprompt {

using EmbeddingVector = std::vector<float>;

// Scales `v` to unit L2 norm. Throws ConfigError for a zero vector.
EmbeddingVector NormalizeL2(std::span<const float> v);

// On-disk embedding file:
//   dim <D> count <C>
//   <label>\t<base64 of D little-endian float32>      (C lines)
struct EmbeddingRecord {
  std::string label;
  EmbeddingVector values;
};

struct EmbeddingFile {
  int dim = 0;
  std::vector<EmbeddingRecord> records;

  static EmbeddingFile Parse(std::string_view text);
  static EmbeddingFile Load(const std::string& path);
  std::string Format() const;
  void Save(const std::string& path) const;
};

// Source of text embeddings (e.g. a CLIP text encoder run offline).
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual EmbeddingVector Embed(const std::string& text) = 0;
};

// Looks sentences up in a precomputed embedding file keyed by sentence text.
class FileEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit FileEmbeddingProvider(const EmbeddingFile& file);
  EmbeddingVector Embed(const std::string& text) override;

 private:
  std::unordered_map<std::string, EmbeddingVector> by_text_;
};

class CallbackEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit CallbackEmbeddingProvider(
      std::function<EmbeddingVector(const std::string&)> fn)
      : fn_(std::move(fn)) {}
  EmbeddingVector Embed(const std::string& text) override { return fn_(text); }

 private:
  std::function<EmbeddingVector(const std::string&)> fn_;
};

// "This is a photo of a <label>"
std::string LabelSentence(const std::string& label);

// Labels with unit-norm embeddings, in insertion order.
class ObjectIndex {
 public:
  ObjectIndex(int dim, std::vector<std::string> labels,
              std::vector<EmbeddingVector> embeddings);

  static ObjectIndex FromFile(const EmbeddingFile& file);
  static ObjectIndex Load(const std::string& path);
  EmbeddingFile ToFile() const;

  int dim() const { return dim_; }
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  std::span<const float> embedding(std::size_t i) const {
    return {data_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }

 private:
  int dim_;
  std::vector<std::string> labels_;
  std::vector<float> data_;  // row-major, size() x dim
};

// Embeds LabelSentence(label) for every label and normalizes.
ObjectIndex BuildIndex(std::span<const std::string> labels,
                       EmbeddingProvider& provider);

struct FramePlan {
  int video_length = 0;
  std::vector<int> indices;
};

// Equally spaced frames with both endpoints included; a single frame picks
// the middle of the video.
FramePlan PlanFrames(int video_length, int frame_count = 3);

enum class FrameAggregation { kMax, kMean };

struct ScoredLabel {
  std::string label;
  double score = 0.0;

  bool operator==(const ScoredLabel&) const = default;
};

// Cosine similarity of every index entry against the frames, aggregated over
// frames; best `top_k` by score with ties kept in index order.
std::vector<ScoredLabel> Retrieve(std::span<const EmbeddingVector> frames,
                                  const ObjectIndex& index, int top_k,
                                  FrameAggregation aggregation =
                                      FrameAggregation::kMax);

const char* AggregationName(FrameAggregation aggregation);
FrameAggregation ParseAggregation(std::string_view name);

}  // namespace wprompt

#endif  // WPROMPT_RETRIEVAL_H_
