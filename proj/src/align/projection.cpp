// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "neurorep/align/layers.hpp"
#include "neurorep/error.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::align {

ProjectionHead make_projection(Eigen::Index in, Eigen::Index out, double dropout, Rng& rng) {
  if (in < 1 || out < 1) fail(ErrorKind::config, "projection sizes must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail(ErrorKind::config, "projection dropout must be in [0, 1)");
  ProjectionHead h;
  h.W.resize(out, in);
  const double sd = 1.0 / std::sqrt(static_cast<double>(in));
  for (Eigen::Index i = 0; i < h.W.size(); ++i) h.W.data()[i] = sd * rng.normal();
  h.b = Vec::Zero(out);
  h.gain = Vec::Ones(out);
  h.bias = Vec::Zero(out);
  h.dropout = dropout;
  return h;
}

Vec project_embedding(const Vec& x, const ProjectionHead& head, bool train_mode, std::uint64_t seed,
                      ProjectionCache* cache) {
  if (x.size() != head.W.cols()) fail(ErrorKind::dimension, "projection: input size mismatch");
  if (!x.allFinite()) fail(ErrorKind::numeric, "projection: non-finite input");
  const Vec h = head.W * x + head.b;
  const double n = static_cast<double>(h.size());
  const double mu = h.mean();
  const Vec centered = (h.array() - mu).matrix();
  const double var = centered.squaredNorm() / n;
  const double inv_std = 1.0 / std::sqrt(var + head.eps);
  const Vec normalized = centered * inv_std;
  Vec y = head.gain.cwiseProduct(normalized) + head.bias;
  Vec mask;
  if (train_mode && head.dropout > 0.0) {
    mask = dropout_mask(y.size(), 1, head.dropout, seed).col(0);
    y = y.cwiseProduct(mask);
  }
  if (cache) {
    cache->x = x;
    cache->normalized = normalized;
    cache->inv_std = inv_std;
    cache->mask = mask;
  }
  return y;
}

ProjectionGrads projection_backward(const ProjectionHead& head, const ProjectionCache& cache, const Vec& dy) {
  if (dy.size() != head.W.rows()) fail(ErrorKind::dimension, "projection_backward: bad gradient");
  const Vec dy0 = cache.mask.size() ? Vec(dy.cwiseProduct(cache.mask)) : dy;
  const Vec& nrm = cache.normalized;
  ProjectionGrads g;
  g.dgain = dy0.cwiseProduct(nrm);
  g.dbias = dy0;
  const Vec dn = dy0.cwiseProduct(head.gain);
  const double m1 = dn.mean();
  const double m2 = dn.cwiseProduct(nrm).mean();
  const Vec dh = cache.inv_std * ((dn.array() - m1).matrix() - m2 * nrm);
  g.db = dh;
  g.dW = dh * cache.x.transpose();
  g.dx = head.W.transpose() * dh;
  return g;
}

}  // namespace neurorep::align
