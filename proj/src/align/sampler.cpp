// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/align/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "neurorep/error.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::align {

void SamplerConfig::validate() const {
  if (top_k < 1) fail(ErrorKind::config, "sampler: top_k must be >= 1");
  if (!(top_p > 0.0 && top_p <= 1.0)) fail(ErrorKind::config, "sampler: top_p must be in (0, 1]");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) fail(ErrorKind::config, "sampler: temperature must be > 0");
}

std::vector<double> filtered_distribution(std::span<const double> logits, const SamplerConfig& cfg) {
  cfg.validate();
  const std::size_t n = logits.size();
  if (n == 0) fail(ErrorKind::input, "sampler: no logits");
  double hi = -std::numeric_limits<double>::infinity();
  for (double l : logits) {
    if (std::isnan(l) || l == std::numeric_limits<double>::infinity()) fail(ErrorKind::numeric, "sampler: bad logit");
    hi = std::max(hi, l);
  }
  if (!std::isfinite(hi)) fail(ErrorKind::degenerate_input, "sampler: every logit is -inf");

  std::vector<double> probs(n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) z += probs[i] = std::exp((logits[i] - hi) / cfg.temperature);
  for (double& p : probs) p /= z;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  std::size_t kept = std::min(cfg.top_k, n);
  double mass = 0.0;
  for (std::size_t i = 0; i < kept; ++i) mass += probs[order[i]];

  double cum = 0.0;
  std::size_t prefix = 0;
  while (prefix < kept) {
    cum += probs[order[prefix]] / mass;
    ++prefix;
    if (cum >= cfg.top_p) break;
  }
  kept = prefix;

  double kept_mass = 0.0;
  for (std::size_t i = 0; i < kept; ++i) kept_mass += probs[order[i]];
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < kept; ++i) out[order[i]] = probs[order[i]] / kept_mass;
  return out;
}

std::size_t sample_top_k_top_p(std::span<const double> logits, const SamplerConfig& cfg, Rng& rng) {
  const auto dist = filtered_distribution(logits, cfg);
  const double u = rng.uniform();
  double cum = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] == 0.0) continue;
    last = i;
    cum += dist[i];
    if (u < cum) return i;
  }
  return last;
}

std::size_t sample_top_k_top_p(std::span<const double> logits, const SamplerConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  return sample_top_k_top_p(logits, cfg, rng);
}

}  // namespace neurorep::align
