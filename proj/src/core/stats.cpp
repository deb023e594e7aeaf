// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/stats.hpp"

#include <algorithm>
#include <cmath>

#include "neurorep/error.hpp"

namespace neurorep {

double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(ErrorKind::input, "percentile of empty sample");
  if (!(p >= 0.0 && p <= 100.0)) fail(ErrorKind::bounds, "percentile outside [0, 100]");
  const double pos = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi) return sorted[lo];
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double percentile(std::span<const double> values, double p) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return percentile_sorted(sorted, p);
}

double mean(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::input, "mean of empty sample");
  const double pivot = values.front();
  double acc = 0.0;
  for (double v : values) acc += v - pivot;
  return pivot + acc / static_cast<double>(values.size());
}

}  // namespace neurorep
