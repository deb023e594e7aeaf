// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "neurorep/metrics/bleu.hpp"
#include "test_support.hpp"

using namespace neurorep::metrics;
using neurorep::ErrorKind;

namespace {

TokenSequence seq(std::vector<std::string> t) { return TokenSequence::from_tokens(std::move(t)); }

TokenSequence random_seq(std::mt19937& gen, std::size_t max_len, int vocab) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<int> word(0, vocab - 1);
  std::vector<std::string> t(len(gen));
  for (auto& w : t) w = "w" + std::to_string(word(gen));
  return seq(t);
}

}  // namespace

TEST_CASE("modified precision clips by reference counts") {
  CHECK(modified_precision(seq({"the", "cat", "sat"}), seq({"the", "cat", "sat"}), 2) == NgramMatch{2, 2});
  CHECK(modified_precision(seq({"the", "the", "the"}), seq({"the", "cat"}), 1) == NgramMatch{1, 3});
  CHECK(modified_precision(seq({"a", "b"}), seq({"c", "d"}), 1) == NgramMatch{0, 2});
  CHECK(modified_precision(seq({"a", "b"}), seq({"a", "b"}), 3) == NgramMatch{0, 0});
}

TEST_CASE("brevity penalty") {
  CHECK(brevity_penalty(3, 3) == 1.0);
  CHECK(std::abs(brevity_penalty(2, 3) - 0.60653) < 1e-5);
  CHECK(brevity_penalty(0, 5) == 0.0);
  CHECK(brevity_penalty(0, 0) == 1.0);
}

TEST_CASE("sentence bleu") {
  const auto x = seq({"the", "cat", "sat", "on", "the", "mat"});
  for (int n = 1; n <= 4; ++n) CHECK(bleu_n(x, x, n) == 1.0);
  CHECK(std::abs(bleu_n(seq({"the", "cat"}), seq({"the", "cat", "sat"}), 1) - 0.60653) < 1e-5);
  // No 4-gram in common, no smoothing.
  CHECK(bleu_n(seq({"a", "b", "c", "x", "d"}), seq({"a", "b", "c", "y", "d"}), 4) == 0.0);
  CHECK(bleu_n(TokenSequence{}, x, 2) == 0.0);
  CHECK_THROWS_KIND(bleu_n(x, x, 5), ErrorKind::bounds);
}

TEST_CASE("corpus bleu") {
  const auto a_c = seq({"the", "cat", "sat", "on", "the", "mat"});
  const auto a_r = seq({"the", "cat", "is", "on", "the", "mat"});
  const auto b_c = seq({"a", "dog"});
  const auto b_r = seq({"a", "dog", "barked"});

  SUBCASE("single pair reduces to sentence bleu") {
    const std::vector<SequencePair> one{{a_c, a_r}};
    for (int n = 1; n <= 4; ++n) CHECK(corpus_bleu(one, n) == bleu_n(a_c, a_r, n));
  }
  SUBCASE("identical pairs give 1") {
    const std::vector<SequencePair> same{{a_c, a_c}, {b_r, b_r}};
    CHECK(corpus_bleu(same, 4) == 1.0);
  }
  SUBCASE("two-pair fixture from hand-summed counts") {
    // unigrams: pair A 5/6, pair B 2/2 -> 7/8; bigrams: A 3/5, B 1/1 -> 4/6;
    // lengths c = 6 + 2, r = 6 + 3.
    const std::vector<SequencePair> two{{a_c, a_r}, {b_c, b_r}};
    const double bp = std::exp(1.0 - 9.0 / 8.0);
    CHECK(corpus_bleu(two, 1) == doctest::Approx(bp * 7.0 / 8.0).epsilon(1e-12));
    CHECK(corpus_bleu(two, 2) == doctest::Approx(bp * std::sqrt(7.0 / 8.0 * 4.0 / 6.0)).epsilon(1e-12));
    // macro: mean of sentence scores
    const double macro = (bleu_n(a_c, a_r, 2) + bleu_n(b_c, b_r, 2)) / 2.0;
    CHECK(corpus_bleu(two, 2, CorpusMode::macro) == doctest::Approx(macro).epsilon(1e-15));
  }
  SUBCASE("empty corpus") { CHECK_THROWS_KIND(corpus_bleu({}, 2), ErrorKind::input); }
}

TEST_CASE("corpus of N copies equals the sentence score") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_seq(gen, 12, 5);
    const auto r = random_seq(gen, 12, 5);
    const std::vector<SequencePair> copies(1 + trial % 7, SequencePair{c, r});
    for (int n = 1; n <= 4; ++n) CHECK(corpus_bleu(copies, n) == bleu_n(c, r, n));
  }
}

// BLEU-(n+1) <= BLEU-n exactly when P(n+1) does not exceed the geometric
// mean of P(1..n); with clipping that can fail, e.g. "a b a" against "b a b".
TEST_CASE("bleu order monotonicity holds iff the next precision is below the running geometric mean") {
  const auto c = seq({"a", "b", "a"});
  const auto r = seq({"b", "a", "b"});
  CHECK(bleu_n(c, r, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(bleu_n(c, r, 2) == doctest::Approx(std::sqrt(2.0 / 3.0)));

  std::mt19937 gen(5);
  int tested = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto cand = random_seq(gen, 15, 3);
    const auto ref = random_seq(gen, 15, 3);
    std::array<double, 4> b{};
    std::array<double, 4> p{};
    for (int n = 1; n <= 4; ++n) {
      b[n - 1] = bleu_n(cand, ref, n);
      const auto m = modified_precision(cand, ref, n);
      p[n - 1] = m.total ? static_cast<double>(m.matched) / static_cast<double>(m.total) : 0.0;
    }
    for (double v : b) CHECK((v >= 0.0 && v <= 1.0));
    if (b[3] == 0.0) continue;
    ++tested;
    double log_sum = 0.0;
    for (int n = 1; n < 4; ++n) {
      log_sum += std::log(p[n - 1]);
      const double running_gm = std::exp(log_sum / n);
      if (p[n] <= running_gm * (1.0 - 1e-12)) CHECK(b[n] <= b[n - 1]);
      if (p[n] >= running_gm * (1.0 + 1e-12)) CHECK(b[n] >= b[n - 1]);
    }
  }
  CHECK(tested > 50);
}
