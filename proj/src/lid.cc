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

#include "wprompt/lid.h"

#include <algorithm>
#include <cmath>

#include "wprompt/errors.h"

namespace wprompt {
namespace {

void FillArgmax(LidResult* result) {
  result->confidence = -1.0;
  for (const auto& [code, p] : result->probs) {
    if (p > result->confidence) {
      result->confidence = p;
      result->argmax = code;
    }
  }
}

}  // namespace

double LidResult::ProbabilityOf(const std::string& code) const {
  for (const auto& [c, p] : probs) {
    if (c == code) return p;
  }
  return 0.0;
}

LidResult LidFromLogits(
    std::span<const std::pair<std::string, double>> logits) {
  if (logits.empty()) throw ConfigError("LID over an empty language set");
  double max_logit = -INFINITY;
  for (const auto& entry : logits) max_logit = std::max(max_logit, entry.second);
  LidResult result;
  double total = 0.0;
  for (const auto& [code, logit] : logits) {
    double e = std::exp(logit - max_logit);
    result.probs.emplace_back(code, e);
    total += e;
  }
  for (auto& entry : result.probs) entry.second /= total;
  FillArgmax(&result);
  return result;
}

LidResult LidFromProbabilities(
    std::span<const std::pair<std::string, double>> probs) {
  if (probs.empty()) throw ConfigError("LID over an empty language set");
  double total = 0.0;
  for (const auto& entry : probs) {
    if (!(entry.second >= 0.0)) {
      throw ConfigError("negative language probability for " + entry.first);
    }
    total += entry.second;
  }
  if (total <= 0.0) throw ConfigError("language probabilities sum to zero");
  LidResult result;
  for (const auto& [code, p] : probs) result.probs.emplace_back(code, p / total);
  FillArgmax(&result);
  return result;
}

}  // namespace wprompt
