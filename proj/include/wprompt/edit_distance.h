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

#ifndef WPROMPT_EDIT_DISTANCE_H_
#define WPROMPT_EDIT_DISTANCE_H_

#include <cstdint>
#include <span>
#include <string>

namespace wprompt {

struct EditStats {
  std::int64_t substitutions = 0;
  std::int64_t deletions = 0;
  std::int64_t insertions = 0;
  std::int64_t ref_len = 0;

  std::int64_t errors() const { return substitutions + deletions + insertions; }
  // Errors per reference token; 0 when the reference is empty.
  double rate() const {
    return ref_len > 0 ? static_cast<double>(errors()) / ref_len : 0.0;
  }
  EditStats& operator+=(const EditStats& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    ref_len += o.ref_len;
    return *this;
  }
  bool operator==(const EditStats&) const = default;
};

// Unit-cost Levenshtein alignment. The backtrace prefers substitution, then
// insertion, then deletion.
EditStats ComputeEditStats(std::span<const std::string> ref,
                           std::span<const std::string> hyp);

}  // namespace wprompt

#endif  // WPROMPT_EDIT_DISTANCE_H_
