// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>

#include "neurorep/error.hpp"
#include "neurorep/harness.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::harness {

SplitSpec SplitSpec::parse(std::string_view ratios, std::uint64_t seed) {
  SplitSpec s;
  s.seed = seed;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? ratios.find('/', pos) : ratios.size();
    if (end == std::string_view::npos) fail(ErrorKind::config, "split ratios must look like 70/20/10");
    const auto part = ratios.substr(pos, end - pos);
    const auto res = std::from_chars(part.data(), part.data() + part.size(), s.parts[i]);
    if (res.ec != std::errc() || res.ptr != part.data() + part.size())
      fail(ErrorKind::config, "bad split ratio '" + std::string(ratios) + "'");
    pos = end + 1;
  }
  s.validate();
  return s;
}

std::string SplitSpec::label() const {
  return std::to_string(parts[0]) + "/" + std::to_string(parts[1]) + "/" + std::to_string(parts[2]);
}

void SplitSpec::validate() const {
  for (auto p : parts)
    if (p == 0 || p > 1'000'000) fail(ErrorKind::config, "split parts must be in 1..1000000");
}

Split split_dataset(std::span<const std::string> sorted_ids, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = sorted_ids.size();
  if (n < 3) fail(ErrorKind::config, "need at least 3 ids to split");
  for (std::size_t i = 1; i < n; ++i) {
    if (sorted_ids[i - 1] == sorted_ids[i]) fail(ErrorKind::ambiguity, "duplicate id " + sorted_ids[i]);
    if (sorted_ids[i - 1] > sorted_ids[i]) fail(ErrorKind::input, "split input ids must be sorted");
  }
  const std::uint64_t total = spec.parts[0] + spec.parts[1] + spec.parts[2];
  const std::size_t n_train = static_cast<std::size_t>(static_cast<std::uint64_t>(n) * spec.parts[0] / total);
  const std::size_t n_val = static_cast<std::size_t>(static_cast<std::uint64_t>(n) * spec.parts[1] / total);
  const std::size_t n_test = n - n_train - n_val;
  if (n_train == 0 || n_val == 0 || n_test == 0)
    fail(ErrorKind::config, "split " + spec.label() + " of " + std::to_string(n) + " ids leaves a part empty");

  std::vector<std::string> ids(sorted_ids.begin(), sorted_ids.end());
  Rng rng(spec.seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(ids[i], ids[rng.uniform_index(i + 1)]);
  Split s;
  s.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.val.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
               ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), ids.end());
  return s;
}

nlohmann::ordered_json to_json(const Split& s, const SplitSpec& spec) {
  nlohmann::ordered_json j;
  j["ratios"] = spec.label();
  j["seed"] = spec.seed;
  j["train"] = s.train;
  j["val"] = s.val;
  j["test"] = s.test;
  return j;
}

}  // namespace neurorep::harness
