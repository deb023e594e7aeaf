// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>

#include "neurorep/metrics/tokenize.hpp"

namespace neurorep::metrics {

struct SequencePair {
  TokenSequence candidate;
  TokenSequence reference;
};

// Multiset of the n-grams of a sequence, keyed by tokens joined with '\x1f'.
std::unordered_map<std::string, std::int64_t> ngram_counts(const TokenSequence& seq, int n);

// Clipped n-gram matches over candidate n-gram count, as an exact pair.
struct NgramMatch {
  std::int64_t matched = 0;
  std::int64_t total = 0;
  bool operator==(const NgramMatch&) const = default;
};

NgramMatch modified_precision(const TokenSequence& cand, const TokenSequence& ref, int n);

// 1 if c >= r, else exp(1 - r/c); 0 when c == 0 and r > 0.
double brevity_penalty(std::size_t c, std::size_t r);

// BP * exp(mean_k ln P(k)) over k = 1..n_max, uniform weights, no smoothing:
// any zero precision gives 0.
double bleu_n(const TokenSequence& cand, const TokenSequence& ref, int n_max);

enum class CorpusMode {
  micro,  // sum clipped counts and lengths over pairs, then apply the formula
  macro,  // arithmetic mean of sentence scores
};

double corpus_bleu(std::span<const SequencePair> pairs, int n_max, CorpusMode mode = CorpusMode::micro);

}  // namespace neurorep::metrics
