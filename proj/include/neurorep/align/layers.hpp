// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace neurorep {
class Rng;
}

namespace neurorep::align {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Inverted-dropout mask: each entry is 0 with probability `rate`, else
// 1 / (1 - rate). All ones when rate is 0.
Mat dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, std::uint64_t seed);

// --- LoRA --------------------------------------------------------------------

enum class LoraTarget { q_proj, v_proj };

// Low-rank additive update (alpha / r) * B * A of a frozen d_out x d_in map.
struct LoraAdapter {
  int rank = 10;
  double alpha = 32.0;
  double dropout = 0.3;
  LoraTarget target = LoraTarget::q_proj;
  Mat A;  // rank x d_in, seeded Gaussian
  Mat B;  // d_out x rank, zeros

  double scale() const { return alpha / rank; }
};

LoraAdapter make_lora(Eigen::Index d_in, Eigen::Index d_out, int rank, double alpha, double dropout, LoraTarget target,
                      Rng& rng);

// y = W x + (alpha / r) B A drop(x); dropout only in train mode.
Vec lora_linear(const Vec& x, const Mat& W, const LoraAdapter& adapter, bool train_mode, std::uint64_t seed);

struct LoraGrads {
  Mat dA;
  Mat dB;
  Vec dx;
};

// Gradients of <dy, y> for the same (x, mode, seed) as the forward call.
LoraGrads lora_linear_backward(const Vec& x, const Mat& W, const LoraAdapter& adapter, const Vec& dy, bool train_mode,
                               std::uint64_t seed);

// --- cosine embedding loss -----------------------------------------------

// target 1: 1 - cos(x1, x2); target -1: max(0, cos(x1, x2)).
double cosine_embedding_loss(const Vec& x1, const Vec& x2, int target = 1);

struct CosineGrad {
  double loss = 0.0;
  Vec d1;
  Vec d2;
};

// Degenerate-input error for zero vectors.
CosineGrad cosine_embedding_loss_grad(const Vec& x1, const Vec& x2, int target = 1);

// --- attention-weighted aggregation -------------------------------------

struct Aggregate {
  Vec output;   // sum_i w_i e_i
  Vec weights;  // softmax of scores
  Vec scores;   // e_i . c / sqrt(dim)
};

// Rows of `embeds` are slice embeddings.
Aggregate attention_aggregate(const Mat& embeds, const Vec& context);

struct AggregateGrad {
  Mat d_embeds;
  Vec d_context;
};

AggregateGrad attention_aggregate_backward(const Mat& embeds, const Vec& context, const Aggregate& fwd,
                                           const Vec& d_output);

// --- projection head ------------------------------------------------------

// Linear, LayerNorm with learned gain and bias, then dropout.
struct ProjectionHead {
  Mat W;      // out x in
  Vec b;
  Vec gain;
  Vec bias;
  double eps = 1e-5;
  double dropout = 0.2;
};

ProjectionHead make_projection(Eigen::Index in, Eigen::Index out, double dropout, Rng& rng);

struct ProjectionCache {
  Vec x;
  Vec normalized;
  double inv_std = 0.0;
  Vec mask;  // empty in eval mode
};

Vec project_embedding(const Vec& x, const ProjectionHead& head, bool train_mode, std::uint64_t seed,
                      ProjectionCache* cache = nullptr);

struct ProjectionGrads {
  Mat dW;
  Vec db;
  Vec dgain;
  Vec dbias;
  Vec dx;
};

ProjectionGrads projection_backward(const ProjectionHead& head, const ProjectionCache& cache, const Vec& dy);

// Numerically stable softmax.
Vec softmax(const Vec& logits);

}  // namespace neurorep::align
