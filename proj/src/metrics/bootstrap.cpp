// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/metrics/bootstrap.hpp"

#include <algorithm>
#include <vector>

#include "neurorep/error.hpp"
#include "neurorep/rng.hpp"
#include "neurorep/stats.hpp"

namespace neurorep::metrics {

Interval bootstrap_aggregate(std::span<const double> scores, std::size_t n_resamples, double ci,
                             std::uint64_t seed) {
  if (scores.empty()) fail(ErrorKind::input, "bootstrap over no scores");
  if (n_resamples == 0) fail(ErrorKind::config, "bootstrap needs at least one resample");
  if (!(ci > 0.0 && ci < 1.0)) fail(ErrorKind::config, "confidence level must be in (0, 1)");

  Rng rng(seed);
  const std::size_t n = scores.size();
  std::vector<double> sample(n);
  std::vector<double> means(n_resamples);
  for (std::size_t b = 0; b < n_resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) sample[i] = scores[rng.uniform_index(n)];
    means[b] = mean(sample);
  }
  std::sort(means.begin(), means.end());
  Interval out;
  out.low = percentile_sorted(means, 100.0 * (1.0 - ci) / 2.0);
  out.mid = percentile_sorted(means, 50.0);
  out.high = percentile_sorted(means, 100.0 * (1.0 + ci) / 2.0);
  return out;
}

}  // namespace neurorep::metrics
