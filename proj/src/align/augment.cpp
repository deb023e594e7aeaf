// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/align/augment.hpp"

#include <cctype>
#include <cmath>
#include <vector>

#include "neurorep/error.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::align {

Vec augment_embedding(const Vec& x, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) fail(ErrorKind::config, "noise sigma must be >= 0");
  if (sigma == 0.0) return x;
  Rng rng(seed);
  Vec out = x;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += sigma * rng.normal();
  return out;
}

namespace {

struct Word {
  std::size_t begin;
  std::size_t end;
};

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

}  // namespace

TextAugmentation augment_text_detail(std::string_view text, double rate, const metrics::SynonymLexicon& lexicon,
                                     std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) fail(ErrorKind::config, "synonym rate must be in [0, 1]");
  std::vector<Word> words;
  for (std::size_t i = 0; i < text.size();) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == text.size()) break;
    const std::size_t b = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    words.push_back({b, i});
  }
  TextAugmentation out{std::string(text), 0};
  const auto target = static_cast<std::size_t>(std::llround(rate * static_cast<double>(words.size())));
  if (target == 0) return out;

  std::vector<std::string> replacement(words.size());
  std::vector<std::size_t> candidates(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) candidates[i] = i;
  Rng rng(seed);
  while (out.replaced < target && !candidates.empty()) {
    const std::size_t j = rng.uniform_index(candidates.size());
    const std::size_t w = candidates[j];
    candidates[j] = candidates.back();
    candidates.pop_back();
    std::size_t b = words[w].begin, e = words[w].end;
    while (b < e && !is_word_char(text[b])) ++b;
    while (e > b && !is_word_char(text[e - 1])) --e;
    if (b == e) continue;
    std::string core(text.substr(b, e - b));
    for (char& c : core) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto syns = lexicon.synonyms_of(core);
    if (syns.empty()) continue;
    std::string pick = syns[rng.uniform_index(syns.size())];
    if (std::isupper(static_cast<unsigned char>(text[b])))
      pick[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(pick[0])));
    replacement[w] = std::string(text.substr(words[w].begin, b - words[w].begin)) + pick +
                     std::string(text.substr(e, words[w].end - e));
    ++out.replaced;
  }

  std::string rebuilt;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (replacement[i].empty()) continue;
    rebuilt.append(text.substr(cursor, words[i].begin - cursor));
    rebuilt.append(replacement[i]);
    cursor = words[i].end;
  }
  rebuilt.append(text.substr(cursor));
  out.text = std::move(rebuilt);
  return out;
}

std::string augment_text(std::string_view text, double rate, const metrics::SynonymLexicon& lexicon,
                         std::uint64_t seed) {
  return augment_text_detail(text, rate, lexicon, seed).text;
}

}  // namespace neurorep::align
