// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "neurorep/metrics/tokenize.hpp"

namespace neurorep::metrics {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  bool operator==(const PRF&) const = default;
};

struct RougeN {
  PRF score;
  // Set when the reference has fewer than n tokens; recall is undefined and
  // all three values are reported as 0.
  bool reference_too_short = false;
};

// Clipped n-gram overlap; recall over reference n-grams, precision over
// candidate n-grams, f the harmonic mean (0 when both are 0).
RougeN rouge_n(const TokenSequence& cand, const TokenSequence& ref, int n);

std::size_t lcs_length(const TokenSequence& x, const TokenSequence& y);

// R = LCS/|ref|, P = LCS/|cand|, F = (1+b^2)RP / (R + b^2 P).
// Throws input error for an empty reference.
PRF rouge_l(const TokenSequence& cand, const TokenSequence& ref, double beta = 1.0);

}  // namespace neurorep::metrics
