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

#ifndef WPROMPT_ERRORS_H_
#define WPROMPT_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "wprompt/types.h"

namespace wprompt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vocabulary manifest could not be parsed or violates an invariant.
class ManifestError : public Error {
 public:
  using Error::Error;
};

// Prompt violates the decoder prompt grammar. `position` is the index of the
// first offending token (or the sequence length when tokens are missing).
class PromptError : public Error {
 public:
  PromptError(const std::string& what, std::size_t position)
      : Error(what + " (at token " + std::to_string(position) + ")"),
        position_(position) {}
  explicit PromptError(const std::string& what)
      : Error(what), position_(kNoPosition) {}

  static constexpr std::size_t kNoPosition = static_cast<std::size_t>(-1);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class BackendError : public Error {
 public:
  using Error::Error;
};

// Backend failed mid-decode; carries the tokens generated so far.
class DecodeError : public BackendError {
 public:
  DecodeError(const std::string& what, std::vector<TokenId> partial)
      : BackendError(what), partial_(std::move(partial)) {}
  const std::vector<TokenId>& partial() const { return partial_; }

 private:
  std::vector<TokenId> partial_;
};

// Run configuration, manifest or other user input is invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wprompt

#endif  // WPROMPT_ERRORS_H_
