// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/metrics/bleu.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "neurorep/error.hpp"

namespace neurorep::metrics {

namespace {

void check_order(int n_max) {
  if (n_max < 1 || n_max > 4) fail(ErrorKind::bounds, "BLEU order must be in [1, 4]");
}

double combine(std::span<const NgramMatch> precisions, std::size_t c, std::size_t r) {
  if (c == 0) return 0.0;
  double log_sum = 0.0;
  for (const auto& p : precisions) {
    if (p.matched == 0 || p.total == 0) return 0.0;
    log_sum += std::log(static_cast<double>(p.matched) / static_cast<double>(p.total));
  }
  const double score = brevity_penalty(c, r) * std::exp(log_sum / static_cast<double>(precisions.size()));
  return std::min(score, 1.0);
}

}  // namespace

std::unordered_map<std::string, std::int64_t> ngram_counts(const TokenSequence& seq, int n) {
  std::unordered_map<std::string, std::int64_t> counts;
  if (n < 1) fail(ErrorKind::bounds, "n-gram order must be >= 1");
  const auto un = static_cast<std::size_t>(n);
  if (seq.size() < un) return counts;
  for (std::size_t i = 0; i + un <= seq.size(); ++i) {
    std::string key = seq[i];
    for (std::size_t j = 1; j < un; ++j) {
      key.push_back('\x1f');
      key += seq[i + j];
    }
    ++counts[key];
  }
  return counts;
}

NgramMatch modified_precision(const TokenSequence& cand, const TokenSequence& ref, int n) {
  const auto cand_counts = ngram_counts(cand, n);
  if (cand_counts.empty()) return {};
  const auto ref_counts = ngram_counts(ref, n);
  NgramMatch out;
  out.total = static_cast<std::int64_t>(cand.size()) - n + 1;
  for (const auto& [gram, count] : cand_counts) {
    const auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) out.matched += std::min(count, it->second);
  }
  return out;
}

double brevity_penalty(std::size_t c, std::size_t r) {
  if (c >= r) return 1.0;
  if (c == 0) return 0.0;
  return std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
}

double bleu_n(const TokenSequence& cand, const TokenSequence& ref, int n_max) {
  check_order(n_max);
  std::array<NgramMatch, 4> p{};
  for (int k = 1; k <= n_max; ++k) p[static_cast<std::size_t>(k - 1)] = modified_precision(cand, ref, k);
  return combine(std::span(p.data(), static_cast<std::size_t>(n_max)), cand.size(), ref.size());
}

double corpus_bleu(std::span<const SequencePair> pairs, int n_max, CorpusMode mode) {
  check_order(n_max);
  if (pairs.empty()) fail(ErrorKind::input, "corpus BLEU over an empty corpus");
  if (mode == CorpusMode::macro) {
    double sum = 0.0;
    for (const auto& pr : pairs) sum += bleu_n(pr.candidate, pr.reference, n_max);
    return sum / static_cast<double>(pairs.size());
  }
  std::array<NgramMatch, 4> p{};
  std::size_t c = 0;
  std::size_t r = 0;
  for (const auto& pr : pairs) {
    c += pr.candidate.size();
    r += pr.reference.size();
    for (int k = 1; k <= n_max; ++k) {
      const auto m = modified_precision(pr.candidate, pr.reference, k);
      auto& acc = p[static_cast<std::size_t>(k - 1)];
      acc.matched += m.matched;
      acc.total += m.total;
    }
  }
  return combine(std::span(p.data(), static_cast<std::size_t>(n_max)), c, r);
}

}  // namespace neurorep::metrics
