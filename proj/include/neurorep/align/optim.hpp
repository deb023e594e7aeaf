// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace neurorep::align {

using ParamSpans = std::vector<std::span<double>>;

// Decoupled weight decay Adam. Moment buffers are created on the first step
// and keyed by position, so every call must pass the same block layout.
class AdamW {
 public:
  AdamW(double lr, double weight_decay, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  // Numeric error (and no update at all) when any gradient is non-finite.
  void step(const ParamSpans& params, const ParamSpans& grads);

  double lr() const noexcept { return lr_; }
  void set_lr(double lr) noexcept { lr_ = lr; }
  long steps() const noexcept { return t_; }

 private:
  double lr_, wd_, b1_, b2_, eps_;
  long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

double global_norm(const ParamSpans& grads);

// Scales every block by max_norm / norm when the global L2 norm exceeds
// max_norm. Returns the norm before clipping.
double clip_grad_norm(const ParamSpans& grads, double max_norm = 1.0);

struct PlateauScheduler {
  int patience = 10;
  double factor = 0.5;
  double min_lr = 1e-7;
  double best = std::numeric_limits<double>::infinity();
  int bad_epochs = 0;

  // Returns the learning rate to use from now on.
  double step(double val_loss, double lr);
};

struct EarlyStopping {
  int patience = 10;
  double best = std::numeric_limits<double>::infinity();
  int best_epoch = -1;
  int bad_epochs = 0;
  bool improved_last = false;

  // True when training should stop after this epoch.
  bool step(double val_loss, int epoch);
};

}  // namespace neurorep::align
