// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/align/optim.hpp"

#include <algorithm>
#include <cmath>

#include "neurorep/error.hpp"

namespace neurorep::align {

AdamW::AdamW(double lr, double weight_decay, double beta1, double beta2, double eps)
    : lr_(lr), wd_(weight_decay), b1_(beta1), b2_(beta2), eps_(eps) {
  if (!(lr >= 0.0) || !(weight_decay >= 0.0) || !(eps > 0.0)) fail(ErrorKind::config, "AdamW: bad hyperparameters");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) fail(ErrorKind::config, "AdamW: betas must be in [0, 1)");
}

void AdamW::step(const ParamSpans& params, const ParamSpans& grads) {
  if (params.size() != grads.size()) fail(ErrorKind::dimension, "AdamW: parameter and gradient lists differ");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size() != grads[i].size()) fail(ErrorKind::dimension, "AdamW: block size mismatch");
    for (double g : grads[i])
      if (!std::isfinite(g)) fail(ErrorKind::numeric, "AdamW: non-finite gradient");
  }
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.size(), 0.0);
      v_.emplace_back(p.size(), 0.0);
    }
  } else if (m_.size() != params.size()) {
    fail(ErrorKind::dimension, "AdamW: parameter layout changed between steps");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  const double step_size = lr_ / bc1;
  const double sqrt_bc2 = std::sqrt(bc2);
  const double decay = 1.0 - lr_ * wd_;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (m_[i].size() != params[i].size()) fail(ErrorKind::dimension, "AdamW: block size changed between steps");
    auto& m = m_[i];
    auto& v = v_[i];
    const auto p = params[i];
    const auto g = grads[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      p[j] *= decay;
      m[j] = b1_ * m[j] + (1.0 - b1_) * g[j];
      v[j] = b2_ * v[j] + (1.0 - b2_) * g[j] * g[j];
      p[j] -= step_size * m[j] / (std::sqrt(v[j]) / sqrt_bc2 + eps_);
    }
  }
}

double global_norm(const ParamSpans& grads) {
  double sq = 0.0;
  for (const auto& g : grads)
    for (double x : g) sq += x * x;
  return std::sqrt(sq);
}

double clip_grad_norm(const ParamSpans& grads, double max_norm) {
  if (!(max_norm > 0.0)) fail(ErrorKind::config, "clip_grad_norm: max_norm must be > 0");
  const double norm = global_norm(grads);
  if (norm > max_norm) {
    const double s = max_norm / norm;
    for (const auto& g : grads)
      for (double& x : g) x *= s;
  }
  return norm;
}

double PlateauScheduler::step(double val_loss, double lr) {
  if (!std::isfinite(val_loss)) fail(ErrorKind::numeric, "scheduler: non-finite validation loss");
  if (val_loss < best) {
    best = val_loss;
    bad_epochs = 0;
    return lr;
  }
  if (++bad_epochs > patience) {
    bad_epochs = 0;
    return std::max(lr * factor, min_lr);
  }
  return lr;
}

bool EarlyStopping::step(double val_loss, int epoch) {
  if (!std::isfinite(val_loss)) fail(ErrorKind::numeric, "early stopping: non-finite validation loss");
  improved_last = val_loss < best;
  if (improved_last) {
    best = val_loss;
    best_epoch = epoch;
    bad_epochs = 0;
    return false;
  }
  return ++bad_epochs >= patience;
}

}  // namespace neurorep::align
