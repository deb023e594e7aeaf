// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "neurorep/align/layers.hpp"
#include "neurorep/mri.hpp"

namespace neurorep::align {

inline constexpr Eigen::Index kPooled = 32;
inline constexpr Eigen::Index kPatch = 8;
inline constexpr Eigen::Index kTokens = 16;    // (32 / 8)^2
inline constexpr Eigen::Index kTokenDim = 64;  // 8 * 8
inline constexpr Eigen::Index kEmbedDim = 512;
inline constexpr Eigen::Index kTextBuckets = 4096;

// Adaptive mean pooling to 32x32, cut into 8x8 patches: row t holds patch
// (t / 4, t % 4) in row-major order.
Mat pool_slice(const mri::Slice2D& slice);

// Fixed sinusoidal table added to the patch tokens.
Mat positional_table();

struct ImageEncoder {
  Mat pos;  // tokens x token_dim
  Mat Wq, Wk, Wv, Wo;
  Vec bq, bk, bv, bo;
  LoraAdapter lora_q;
  LoraAdapter lora_v;
  bool use_lora = true;
  Mat Wout;  // 512 x token_dim
  Vec bout;
};

ImageEncoder make_image_encoder(int lora_rank, double lora_alpha, double lora_dropout, std::uint64_t seed);

struct ImageCache {
  Mat X, Xq, Xv;  // tokens; dropped copies fed to the q and v adapters
  Mat Uq, Uv;     // A applied to the dropped tokens
  Mat Q, K, V, A, H;
  Vec z;
};

// `tokens` comes from pool_slice. Dropout on the adapter inputs only in
// train mode.
Vec encode_tokens(const ImageEncoder& enc, const Mat& tokens, bool train_mode, std::uint64_t seed,
                  ImageCache* cache = nullptr);

Vec encode_slice(const ImageEncoder& enc, const mri::Slice2D& slice);

// Gradients of the trainable image parameters.
struct ImageGrads {
  Mat dAq, dBq, dAv, dBv, dWout;
  Vec dbout;

  static ImageGrads zeros_like(const ImageEncoder& enc);
  void add(const ImageGrads& other);
};

void encode_tokens_backward(const ImageEncoder& enc, const ImageCache& cache, const Vec& d_embed, ImageGrads& grads);

// Sorted (bucket, weight) pairs with unit L2 norm.
using SparseFeatures = std::vector<std::pair<Eigen::Index, double>>;

std::uint64_t fnv1a64(std::string_view s);

// Hashed bag of tokens; input error when the text has no tokens.
SparseFeatures text_features(std::string_view text);

struct TextEncoder {
  Mat W;  // 512 x 4096
  Vec b;
};

TextEncoder make_text_encoder(std::uint64_t seed);

Vec encode_features(const TextEncoder& enc, const SparseFeatures& f);
Vec encode_text(const TextEncoder& enc, std::string_view text);

struct TextGrads {
  Mat dW;
  Vec db;

  static TextGrads zeros_like(const TextEncoder& enc);
  void add(const TextGrads& other);
};

void encode_features_backward(const SparseFeatures& f, const Vec& d_embed, TextGrads& grads);

}  // namespace neurorep::align
