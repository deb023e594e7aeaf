// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "neurorep/align/layers.hpp"
#include "neurorep/error.hpp"

namespace neurorep::align {

Vec softmax(const Vec& logits) {
  if (logits.size() == 0) fail(ErrorKind::input, "softmax of an empty vector");
  const double m = logits.maxCoeff();
  Vec e = (logits.array() - m).exp().matrix();
  return e / e.sum();
}

CosineGrad cosine_embedding_loss_grad(const Vec& x1, const Vec& x2, int target) {
  if (x1.size() != x2.size()) fail(ErrorKind::dimension, "cosine loss: vectors differ in length");
  if (target != 1 && target != -1) fail(ErrorKind::config, "cosine target must be 1 or -1");
  const double n1 = x1.norm(), n2 = x2.norm();
  if (!(n1 > 0.0) || !(n2 > 0.0)) fail(ErrorKind::degenerate_input, "cosine loss of a zero vector");
  const double cos = x1.dot(x2) / (n1 * n2);
  // d cos / d x1 and d cos / d x2
  const Vec g1 = x2 / (n1 * n2) - cos * x1 / (n1 * n1);
  const Vec g2 = x1 / (n1 * n2) - cos * x2 / (n2 * n2);
  CosineGrad out;
  if (target == 1) {
    out.loss = 1.0 - cos;
    out.d1 = -g1;
    out.d2 = -g2;
  } else if (cos > 0.0) {
    out.loss = cos;
    out.d1 = g1;
    out.d2 = g2;
  } else {
    out.loss = 0.0;
    out.d1 = Vec::Zero(x1.size());
    out.d2 = Vec::Zero(x2.size());
  }
  return out;
}

double cosine_embedding_loss(const Vec& x1, const Vec& x2, int target) {
  return cosine_embedding_loss_grad(x1, x2, target).loss;
}

Aggregate attention_aggregate(const Mat& embeds, const Vec& context) {
  if (embeds.rows() == 0) fail(ErrorKind::input, "attention_aggregate needs at least one embedding");
  if (embeds.cols() != context.size()) fail(ErrorKind::dimension, "attention_aggregate: context size mismatch");
  Aggregate a;
  a.scores = embeds * context / std::sqrt(static_cast<double>(context.size()));
  a.weights = softmax(a.scores);
  a.output = embeds.transpose() * a.weights;
  return a;
}

AggregateGrad attention_aggregate_backward(const Mat& embeds, const Vec& context, const Aggregate& fwd,
                                           const Vec& d_output) {
  if (d_output.size() != embeds.cols()) fail(ErrorKind::dimension, "attention_aggregate_backward: bad gradient");
  const double inv = 1.0 / std::sqrt(static_cast<double>(context.size()));
  const Vec dw = embeds * d_output;
  const Vec ds = fwd.weights.cwiseProduct((dw.array() - fwd.weights.dot(dw)).matrix());
  AggregateGrad g;
  g.d_embeds = fwd.weights * d_output.transpose() + inv * ds * context.transpose();
  g.d_context = inv * (embeds.transpose() * ds);
  return g;
}

}  // namespace neurorep::align
