// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "neurorep/align/layers.hpp"
#include "neurorep/metrics/lexicon.hpp"

namespace neurorep::align {

// x + N(0, sigma^2) per coordinate.
Vec augment_embedding(const Vec& x, double sigma, std::uint64_t seed);

struct TextAugmentation {
  std::string text;
  std::size_t replaced = 0;
};

// Replaces round(rate * words) whitespace-separated words with a lexicon
// synonym, positions drawn without replacement. Surrounding punctuation and
// a leading capital are kept.
TextAugmentation augment_text_detail(std::string_view text, double rate, const metrics::SynonymLexicon& lexicon,
                                     std::uint64_t seed);

std::string augment_text(std::string_view text, double rate, const metrics::SynonymLexicon& lexicon,
                         std::uint64_t seed);

}  // namespace neurorep::align
