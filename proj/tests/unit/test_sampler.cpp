// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "neurorep/align/sampler.hpp"
#include "neurorep/rng.hpp"
#include "test_support.hpp"

using namespace neurorep;
using namespace neurorep::align;

namespace {

std::vector<double> log_probs(std::initializer_list<double> p) {
  std::vector<double> out;
  for (double x : p) out.push_back(std::log(x));
  return out;
}

}  // namespace

TEST_CASE("filtered distribution: hand example") {
  const auto d = filtered_distribution(log_probs({0.5, 0.3, 0.2}), {2, 0.9, 1.0});
  CHECK(d[0] == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(d[1] == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(d[2] == 0.0);
}

TEST_CASE("top-p keeps the smallest prefix reaching p") {
  const auto d = filtered_distribution(log_probs({0.1, 0.6, 0.3}), {10, 0.5, 1.0});
  CHECK(d[1] == 1.0);
  CHECK(d[0] == 0.0);
  const auto e = filtered_distribution(log_probs({0.1, 0.6, 0.3}), {10, 0.65, 1.0});
  CHECK(e[1] == doctest::Approx(2.0 / 3.0));
  CHECK(e[2] == doctest::Approx(1.0 / 3.0));
  CHECK(e[0] == 0.0);
}

TEST_CASE("ties go to the lower index") {
  const std::vector<double> logits{1.0, 2.0, 2.0, 2.0};
  const auto d = filtered_distribution(logits, {2, 1.0, 1.0});
  CHECK(d[1] == 0.5);
  CHECK(d[2] == 0.5);
  CHECK(d[3] == 0.0);
}

TEST_CASE("k = 1 always returns the argmax") {
  const std::vector<double> logits{0.3, 2.5, 2.4, -1.0};
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) CHECK(sample_top_k_top_p(logits, {1, 0.9, 0.6}, rng) == 1);
}

TEST_CASE("low temperature concentrates on the argmax") {
  const std::vector<double> logits{0.0, 1.0, 3.0, 2.0, -1.0};
  Rng rng(2);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) hits += sample_top_k_top_p(logits, {10, 1.0, 0.01}, rng) == 2;
  CHECK(hits >= 999);
}

TEST_CASE("empirical frequencies within 3 sigma; filtered indices never drawn") {
  std::vector<double> logits(20);
  for (std::size_t i = 0; i < 20; ++i) logits[i] = std::sin(1.7 * static_cast<double>(i)) + 0.05 * static_cast<double>(i);
  const SamplerConfig cfg{10, 0.9, 0.6};
  const auto d = filtered_distribution(logits, cfg);
  Rng rng(3);
  const int n = 10000;
  std::vector<int> counts(20, 0);
  for (int i = 0; i < n; ++i) ++counts[sample_top_k_top_p(logits, cfg, rng)];
  int kept = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    if (d[i] == 0.0) {
      CHECK(counts[i] == 0);
      continue;
    }
    ++kept;
    const double sigma = std::sqrt(n * d[i] * (1.0 - d[i]));
    CHECK(std::abs(counts[i] - n * d[i]) <= 3.0 * sigma);
  }
  CHECK(kept >= 2);
  CHECK(kept <= 10);
}

TEST_CASE("seeded sampling is deterministic") {
  const std::vector<double> logits{0.1, 0.2, 0.3, 0.4};
  CHECK(sample_top_k_top_p(logits, {}, 5) == sample_top_k_top_p(logits, {}, 5));
}

TEST_CASE("sampler configuration errors") {
  const std::vector<double> logits{0.1, 0.2};
  CHECK_THROWS_KIND(filtered_distribution(logits, {0, 0.9, 0.6}), ErrorKind::config);
  CHECK_THROWS_KIND(filtered_distribution(logits, {10, 0.0, 0.6}), ErrorKind::config);
  CHECK_THROWS_KIND(filtered_distribution(logits, {10, 1.5, 0.6}), ErrorKind::config);
  CHECK_THROWS_KIND(filtered_distribution(logits, {10, 0.9, 0.0}), ErrorKind::config);
  CHECK_THROWS_KIND(filtered_distribution(std::vector<double>{}, {}), ErrorKind::input);
}
