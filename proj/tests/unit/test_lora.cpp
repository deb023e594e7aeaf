// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "gradcheck.hpp"
#include "neurorep/align/encoders.hpp"
#include "neurorep/align/layers.hpp"
#include "test_support.hpp"

using namespace neurorep;
using namespace neurorep::align;

TEST_CASE("fresh adapter: zero B, seeded A, scale 3.2") {
  Rng r1(5), r2(5);
  const auto a = make_lora(64, 32, 10, 32.0, 0.3, LoraTarget::q_proj, r1);
  const auto b = make_lora(64, 32, 10, 32.0, 0.3, LoraTarget::q_proj, r2);
  CHECK(a.A.rows() == 10);
  CHECK(a.A.cols() == 64);
  CHECK(a.B.rows() == 32);
  CHECK(a.B.isZero(0.0));
  CHECK(a.A == b.A);
  CHECK(a.A.cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.scale() == 3.2);
  Rng r3(1);
  CHECK_THROWS_KIND(make_lora(4, 4, 0, 32.0, 0.3, LoraTarget::v_proj, r3), ErrorKind::config);
  CHECK_THROWS_KIND(make_lora(4, 4, 2, 32.0, 1.0, LoraTarget::v_proj, r3), ErrorKind::config);
}

TEST_CASE("zero-init adapter is the identity on the base map") {
  Rng rng(11);
  const Mat W = gradcheck::random_mat(32, 64, rng);
  const auto a = make_lora(64, 32, 10, 32.0, 0.3, LoraTarget::q_proj, rng);
  for (int i = 0; i < 10; ++i) {
    const Vec x = gradcheck::random_vec(64, rng);
    const Vec base = W * x;
    CHECK(lora_linear(x, W, a, false, 0) == base);
    CHECK(lora_linear(x, W, a, true, 99 + i) == base);
  }
}

TEST_CASE("additive term is scaled by alpha / r") {
  Rng rng(12);
  const Mat W = gradcheck::random_mat(8, 6, rng);
  auto a = make_lora(6, 8, 10, 32.0, 0.3, LoraTarget::v_proj, rng);
  a.B = gradcheck::random_mat(8, 10, rng);
  const Vec x = gradcheck::random_vec(6, rng);
  const Vec delta = lora_linear(x, W, a, false, 0) - W * x;
  const Vec manual = a.B * (a.A * x);
  CHECK((delta - 3.2 * manual).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dropout only in train mode, seeded") {
  Rng rng(13);
  const Mat W = gradcheck::random_mat(8, 40, rng);
  auto a = make_lora(40, 8, 10, 32.0, 0.3, LoraTarget::q_proj, rng);
  a.B = gradcheck::random_mat(8, 10, rng);
  const Vec x = gradcheck::random_vec(40, rng);
  CHECK(lora_linear(x, W, a, false, 1) == lora_linear(x, W, a, false, 2));
  CHECK(lora_linear(x, W, a, true, 7) == lora_linear(x, W, a, true, 7));
  CHECK(lora_linear(x, W, a, true, 7) != lora_linear(x, W, a, false, 7));
}

TEST_CASE("dropout mask statistics") {
  const Mat m = dropout_mask(200, 500, 0.3, 42);
  long zeros = 0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    CHECK((v == 0.0 || v == 1.0 / 0.7));
    zeros += v == 0.0;
  }
  const double n = static_cast<double>(m.size());
  const double sd = std::sqrt(n * 0.3 * 0.7);
  CHECK(std::abs(static_cast<double>(zeros) - 0.3 * n) < 4.0 * sd);
  CHECK(dropout_mask(3, 3, 0.0, 1) == Mat::Ones(3, 3));
  CHECK_THROWS_KIND(dropout_mask(3, 3, 1.0, 1), ErrorKind::config);
}

TEST_CASE("shape mismatch is a dimension error") {
  Rng rng(14);
  const Mat W = gradcheck::random_mat(8, 6, rng);
  const auto a = make_lora(6, 8, 4, 8.0, 0.3, LoraTarget::q_proj, rng);
  CHECK_THROWS_KIND(lora_linear(Vec::Zero(5), W, a, false, 0), ErrorKind::dimension);
  const auto wrong = make_lora(6, 7, 4, 8.0, 0.3, LoraTarget::q_proj, rng);
  CHECK_THROWS_KIND(lora_linear(Vec::Zero(6), W, wrong, false, 0), ErrorKind::dimension);
  CHECK_THROWS_KIND(lora_linear_backward(Vec::Zero(6), W, a, Vec::Zero(3), false, 0), ErrorKind::dimension);
}

TEST_CASE("LoRA path gradients match central differences") {
  Rng rng(15);
  for (int point = 0; point < 10; ++point) {
    const Mat W = gradcheck::random_mat(12, 20, rng);
    auto a = make_lora(20, 12, 10, 32.0, 0.3, LoraTarget::q_proj, rng);
    a.B = gradcheck::random_mat(12, 10, rng, 0.3);
    Vec x = gradcheck::random_vec(20, rng);
    const Vec r = gradcheck::random_vec(12, rng);
    const bool train = point % 2 == 0;
    const std::uint64_t seed = 100 + static_cast<std::uint64_t>(point);
    const auto f = [&] { return r.dot(lora_linear(x, W, a, train, seed)); };
    const auto g = lora_linear_backward(x, W, a, r, train, seed);
    const auto all = [](Eigen::Index n) {
      std::vector<std::size_t> c(static_cast<std::size_t>(n));
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = i;
      return c;
    };
    CHECK(gradcheck::rel_error(g.dA.reshaped(), gradcheck::numeric(f, a.A.data(), all(a.A.size()))) < 1e-4);
    CHECK(gradcheck::rel_error(g.dB.reshaped(), gradcheck::numeric(f, a.B.data(), all(a.B.size()))) < 1e-4);
    CHECK(gradcheck::rel_error(g.dx, gradcheck::numeric(f, x.data(), all(x.size()))) < 1e-4);
  }
}

TEST_CASE("adapted encoder equals the base encoder before training") {
  const auto enc = make_image_encoder(10, 32.0, 0.3, 21);
  auto base = enc;
  base.use_lora = false;
  Rng rng(22);
  for (int i = 0; i < 5; ++i) {
    const Mat tokens = gradcheck::random_mat(kTokens, kTokenDim, rng).cwiseAbs();
    const Vec adapted = encode_tokens(enc, tokens, false, 0);
    CHECK((adapted - encode_tokens(base, tokens, false, 0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((encode_tokens(enc, tokens, true, 5 + i) - encode_tokens(base, tokens, true, 5 + i)).cwiseAbs().maxCoeff() ==
          0.0);
  }
}
