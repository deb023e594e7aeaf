// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <random>

#include "neurorep/metrics/rouge.hpp"
#include "test_support.hpp"

using namespace neurorep::metrics;
using neurorep::ErrorKind;

namespace {

TokenSequence seq(std::vector<std::string> t) { return TokenSequence::from_tokens(std::move(t)); }

TokenSequence random_seq(std::mt19937& gen, std::size_t min_len, std::size_t max_len, int vocab) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<int> word(0, vocab - 1);
  std::vector<std::string> t(len(gen));
  for (auto& w : t) w = std::string(1, static_cast<char>('a' + word(gen)));
  return seq(t);
}

bool is_subsequence(const std::vector<std::string>& sub, const TokenSequence& y) {
  std::size_t j = 0;
  for (const auto& tok : y)
    if (j < sub.size() && sub[j] == tok) ++j;
  return j == sub.size();
}

// Tries every subsequence of x.
std::size_t exhaustive_lcs(const TokenSequence& x, const TokenSequence& y) {
  std::size_t best = 0;
  const std::size_t n = x.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(x[i]);
    if (sub.size() > best && is_subsequence(sub, y)) best = sub.size();
  }
  return best;
}

// Multiset intersection of n-gram vectors built without hashing.
std::size_t naive_overlap(const TokenSequence& c, const TokenSequence& r, std::size_t n) {
  auto grams = [n](const TokenSequence& s) {
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i + n <= s.size(); ++i) out.emplace_back(s.begin() + i, s.begin() + i + n);
    return out;
  };
  auto cg = grams(c);
  auto rg = grams(r);
  std::size_t overlap = 0;
  std::vector<bool> used(rg.size(), false);
  for (const auto& g : cg) {
    for (std::size_t j = 0; j < rg.size(); ++j) {
      if (!used[j] && rg[j] == g) {
        used[j] = true;
        ++overlap;
        break;
      }
    }
  }
  return overlap;
}

}  // namespace

TEST_CASE("rouge-n examples") {
  const auto r = rouge_n(seq({"the", "cat", "sat"}), seq({"the", "cat", "slept"}), 1);
  CHECK(r.score.precision == doctest::Approx(2.0 / 3.0));
  CHECK(r.score.recall == doctest::Approx(2.0 / 3.0));
  CHECK(r.score.f == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(r.reference_too_short);

  const auto x = seq({"a", "b", "c"});
  CHECK(rouge_n(x, x, 2).score == PRF{1.0, 1.0, 1.0});
  CHECK(rouge_n(seq({"a", "b"}), seq({"c", "d"}), 1).score == PRF{0.0, 0.0, 0.0});

  const auto short_ref = rouge_n(x, seq({"a"}), 2);
  CHECK(short_ref.reference_too_short);
  CHECK(short_ref.score == PRF{});
}

TEST_CASE("lcs examples") {
  CHECK(lcs_length(seq({"a", "b", "c"}), seq({"a", "b", "c"})) == 3);
  CHECK(lcs_length(seq({"a", "b", "c", "d"}), seq({"a", "c", "b", "d"})) == 3);
  CHECK(lcs_length(TokenSequence{}, seq({"a"})) == 0);
  CHECK(lcs_length(seq({"a"}), TokenSequence{}) == 0);
}

TEST_CASE("rouge-l examples") {
  const auto x = seq({"a", "b", "c"});
  CHECK(rouge_l(x, x) == PRF{1.0, 1.0, 1.0});
  const auto p = rouge_l(seq({"a", "c", "b", "d"}), seq({"a", "b", "c", "d"}));
  CHECK(p.recall == 0.75);
  CHECK(p.precision == 0.75);
  CHECK(p.f == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(rouge_l(seq({"x"}), x) == PRF{});
  CHECK_THROWS_KIND(rouge_l(x, TokenSequence{}), ErrorKind::input);
}

TEST_CASE("rouge-l beta weights recall") {
  const auto p = rouge_l(seq({"a", "b"}), seq({"a", "b", "c", "d"}), 2.0);
  // R = 0.5, P = 1: (1+4) * 0.5 / (0.5 + 4)
  CHECK(p.f == doctest::Approx(5.0 * 0.5 / 4.5));
}

TEST_CASE("lcs matches exhaustive search") {
  std::mt19937 gen(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = random_seq(gen, 0, 10, 4);
    const auto y = random_seq(gen, 0, 10, 4);
    CHECK(lcs_length(x, y) == exhaustive_lcs(x, y));
  }
}

TEST_CASE("rouge-n recall equals naive multiset intersection") {
  std::mt19937 gen(77);
  for (int trial = 0; trial < 500; ++trial) {
    const auto c = random_seq(gen, 0, 12, 3);
    const auto r = random_seq(gen, 1, 12, 3);
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto got = rouge_n(c, r, static_cast<int>(n));
      if (r.size() < n) {
        CHECK(got.reference_too_short);
        continue;
      }
      const double expected = static_cast<double>(naive_overlap(c, r, n)) / static_cast<double>(r.size() - n + 1);
      CHECK(got.score.recall == expected);
    }
  }
}
