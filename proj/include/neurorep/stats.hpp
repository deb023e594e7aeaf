// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace neurorep {

// Percentile by linear interpolation between closest ranks: position
// p/100 * (n-1) in the sorted sample. p in [0, 100]; input must be sorted
// ascending and nonempty.
double percentile_sorted(std::span<const double> sorted, double p);

// Convenience overload that sorts a copy.
double percentile(std::span<const double> values, double p);

// Mean computed from deviations to the first element, so a constant sample
// returns that constant exactly.
double mean(std::span<const double> values);

}  // namespace neurorep
