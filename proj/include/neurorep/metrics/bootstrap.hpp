// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

namespace neurorep::metrics {

struct Interval {
  double low = 0.0;
  double mid = 0.0;
  double high = 0.0;
};

// Resamples with replacement n_resamples times and records each resample
// mean. mid is the median of the means; low/high are the (1-ci)/2 and
// (1+ci)/2 percentiles, all by linear interpolation.
Interval bootstrap_aggregate(std::span<const double> scores, std::size_t n_resamples = 1000, double ci = 0.95,
                             std::uint64_t seed = 0);

}  // namespace neurorep::metrics
