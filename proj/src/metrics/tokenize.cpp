// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/metrics/tokenize.hpp"

#include <cctype>

#include "neurorep/error.hpp"

namespace neurorep::metrics {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }

}  // namespace

TokenSequence tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_space(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (!is_punct(c)) {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return TokenSequence(std::move(tokens));
}

TokenSequence TokenSequence::from_tokens(std::vector<std::string> tokens) {
  for (const auto& t : tokens) {
    if (t.empty()) fail(ErrorKind::input, "empty token");
    for (const char ch : t) {
      const auto c = static_cast<unsigned char>(ch);
      if (is_space(c) || is_punct(c) || (c < 0x80 && std::isupper(c)))
        fail(ErrorKind::input, "token '" + t + "' is not canonical");
    }
  }
  return TokenSequence(std::move(tokens));
}

}  // namespace neurorep::metrics
