// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/align/layers.hpp"
#include "neurorep/error.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::align {

namespace {

void check_shapes(const Vec& x, const Mat& W, const LoraAdapter& a) {
  if (W.cols() != x.size() || a.A.cols() != x.size() || a.B.rows() != W.rows() || a.A.rows() != a.rank ||
      a.B.cols() != a.rank)
    fail(ErrorKind::dimension, "lora_linear: inconsistent shapes");
}

Vec dropped(const Vec& x, const LoraAdapter& a, bool train_mode, std::uint64_t seed) {
  if (!train_mode || a.dropout == 0.0) return x;
  return x.cwiseProduct(dropout_mask(x.size(), 1, a.dropout, seed).col(0));
}

}  // namespace

Mat dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0)) fail(ErrorKind::config, "dropout rate must be in [0, 1)");
  Mat m = Mat::Ones(rows, cols);
  if (rate == 0.0) return m;
  Rng rng(seed);
  const double keep = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.bernoulli(rate) ? 0.0 : keep;
  return m;
}

LoraAdapter make_lora(Eigen::Index d_in, Eigen::Index d_out, int rank, double alpha, double dropout, LoraTarget target,
                      Rng& rng) {
  if (rank < 1 || !(alpha > 0.0)) fail(ErrorKind::config, "lora rank and alpha must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail(ErrorKind::config, "lora dropout must be in [0, 1)");
  LoraAdapter a;
  a.rank = rank;
  a.alpha = alpha;
  a.dropout = dropout;
  a.target = target;
  a.A.resize(rank, d_in);
  const double sd = 1.0 / std::sqrt(static_cast<double>(d_in));
  for (Eigen::Index i = 0; i < a.A.size(); ++i) a.A.data()[i] = sd * rng.normal();
  a.B = Mat::Zero(d_out, rank);
  return a;
}

Vec lora_linear(const Vec& x, const Mat& W, const LoraAdapter& a, bool train_mode, std::uint64_t seed) {
  check_shapes(x, W, a);
  Vec y = W * x;
  const Vec u = a.A * dropped(x, a, train_mode, seed);
  y += a.scale() * (a.B * u);
  return y;
}

LoraGrads lora_linear_backward(const Vec& x, const Mat& W, const LoraAdapter& a, const Vec& dy, bool train_mode,
                               std::uint64_t seed) {
  check_shapes(x, W, a);
  if (dy.size() != W.rows()) fail(ErrorKind::dimension, "lora_linear_backward: dy has wrong size");
  const double s = a.scale();
  Vec mask = Vec::Ones(x.size());
  if (train_mode && a.dropout > 0.0) mask = dropout_mask(x.size(), 1, a.dropout, seed).col(0);
  const Vec xd = x.cwiseProduct(mask);
  const Vec u = a.A * xd;
  const Vec bt_dy = a.B.transpose() * dy;
  LoraGrads g;
  g.dB = s * dy * u.transpose();
  g.dA = s * bt_dy * xd.transpose();
  g.dx = W.transpose() * dy + s * (a.A.transpose() * bt_dy).cwiseProduct(mask);
  return g;
}

}  // namespace neurorep::align
