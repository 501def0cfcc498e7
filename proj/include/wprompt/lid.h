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

#ifndef WPROMPT_LID_H_
#define WPROMPT_LID_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wprompt {

// Language-identification distribution over an allowed language set.
struct LidResult {
  // In the order of the allowed set; sums to 1.
  std::vector<std::pair<std::string, double>> probs;
  std::string argmax;
  double confidence = 0.0;

  double ProbabilityOf(const std::string& code) const;
};

// Softmax over (language, logit) pairs. Ties in the argmax resolve to the
// earliest entry. Throws ConfigError on an empty input.
LidResult LidFromLogits(
    std::span<const std::pair<std::string, double>> logits);

// Builds a result from an explicit distribution (renormalized).
LidResult LidFromProbabilities(
    std::span<const std::pair<std::string, double>> probs);

}  // namespace wprompt

#endif  // WPROMPT_LID_H_
