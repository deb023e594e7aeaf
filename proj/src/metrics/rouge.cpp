// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/metrics/rouge.hpp"

#include <algorithm>
#include <vector>

#include "neurorep/error.hpp"
#include "neurorep/metrics/bleu.hpp"

namespace neurorep::metrics {

namespace {

double harmonic(double p, double r) { return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

RougeN rouge_n(const TokenSequence& cand, const TokenSequence& ref, int n) {
  if (n < 1) fail(ErrorKind::bounds, "ROUGE-n order must be >= 1");
  RougeN out;
  const auto un = static_cast<std::size_t>(n);
  if (ref.size() < un) {
    out.reference_too_short = true;
    return out;
  }
  const auto ref_counts = ngram_counts(ref, n);
  const auto cand_counts = ngram_counts(cand, n);
  std::int64_t overlap = 0;
  for (const auto& [gram, count] : cand_counts) {
    const auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) overlap += std::min(count, it->second);
  }
  const auto ref_total = static_cast<double>(ref.size() - un + 1);
  const double cand_total = cand.size() >= un ? static_cast<double>(cand.size() - un + 1) : 0.0;
  out.score.recall = static_cast<double>(overlap) / ref_total;
  out.score.precision = cand_total > 0.0 ? static_cast<double>(overlap) / cand_total : 0.0;
  out.score.f = harmonic(out.score.precision, out.score.recall);
  return out;
}

std::size_t lcs_length(const TokenSequence& x, const TokenSequence& y) {
  if (x.empty() || y.empty()) return 0;
  // Two-row DP over y.
  std::vector<std::size_t> prev(y.size() + 1, 0);
  std::vector<std::size_t> cur(y.size() + 1, 0);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    for (std::size_t j = 1; j <= y.size(); ++j) {
      cur[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

PRF rouge_l(const TokenSequence& cand, const TokenSequence& ref, double beta) {
  if (ref.empty()) fail(ErrorKind::input, "ROUGE-L needs a nonempty reference");
  const std::size_t lcs = lcs_length(ref, cand);
  if (lcs == 0) return {};
  PRF out;
  out.recall = static_cast<double>(lcs) / static_cast<double>(ref.size());
  out.precision = static_cast<double>(lcs) / static_cast<double>(cand.size());
  const double b2 = beta * beta;
  out.f = (1.0 + b2) * out.recall * out.precision / (out.recall + out.precision * b2);
  return out;
}

}  // namespace neurorep::metrics
