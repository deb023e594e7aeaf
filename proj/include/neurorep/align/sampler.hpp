// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace neurorep {
class Rng;
}

namespace neurorep::align {

struct SamplerConfig {
  std::size_t top_k = 10;
  double top_p = 0.9;
  double temperature = 0.6;

  void validate() const;
};

// Probability of each index after temperature, top-k (ties to the lower
// index) and top-p filtering, renormalized. Zero outside the kept set.
std::vector<double> filtered_distribution(std::span<const double> logits, const SamplerConfig& cfg);

std::size_t sample_top_k_top_p(std::span<const double> logits, const SamplerConfig& cfg, Rng& rng);
std::size_t sample_top_k_top_p(std::span<const double> logits, const SamplerConfig& cfg, std::uint64_t seed);

}  // namespace neurorep::align
