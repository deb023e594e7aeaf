// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace neurorep::metrics {

// Lowercase, punctuation-free, nonempty tokens. Obtain one from tokenize()
// or from_tokens(), which rejects tokens the tokenizer could never produce.
class TokenSequence {
 public:
  TokenSequence() = default;

  static TokenSequence from_tokens(std::vector<std::string> tokens);

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }
  auto begin() const noexcept { return tokens_.begin(); }
  auto end() const noexcept { return tokens_.end(); }

  bool operator==(const TokenSequence&) const = default;

 private:
  explicit TokenSequence(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}
  friend TokenSequence tokenize(std::string_view text);

  std::vector<std::string> tokens_;
};

// ASCII lowercase, strip ASCII punctuation, split on whitespace.
TokenSequence tokenize(std::string_view text);

}  // namespace neurorep::metrics
