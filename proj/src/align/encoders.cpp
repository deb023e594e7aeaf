// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/align/encoders.hpp"

#include <cmath>
#include <map>

#include "neurorep/error.hpp"
#include "neurorep/metrics/tokenize.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::align {

namespace {

Mat gaussian(Eigen::Index rows, Eigen::Index cols, double sd, Rng& rng) {
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = sd * rng.normal();
  return m;
}

Mat row_softmax(const Mat& s) {
  Mat out(s.rows(), s.cols());
  for (Eigen::Index r = 0; r < s.rows(); ++r) out.row(r) = softmax(s.row(r).transpose()).transpose();
  return out;
}

const double kAttnScale = 1.0 / std::sqrt(static_cast<double>(kTokenDim));

}  // namespace

Mat pool_slice(const mri::Slice2D& slice) {
  const std::size_t R = slice.rows, C = slice.cols;
  if (R == 0 || C == 0 || slice.pixels.size() != R * C) fail(ErrorKind::dimension, "pool_slice: malformed slice");
  Mat pooled(kPooled, kPooled);
  for (Eigen::Index i = 0; i < kPooled; ++i) {
    const std::size_t r0 = static_cast<std::size_t>(i) * R / kPooled;
    const std::size_t r1 = (static_cast<std::size_t>(i + 1) * R + kPooled - 1) / kPooled;
    for (Eigen::Index j = 0; j < kPooled; ++j) {
      const std::size_t c0 = static_cast<std::size_t>(j) * C / kPooled;
      const std::size_t c1 = (static_cast<std::size_t>(j + 1) * C + kPooled - 1) / kPooled;
      double sum = 0.0;
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) sum += slice.at(r, c);
      pooled(i, j) = sum / static_cast<double>((r1 - r0) * (c1 - c0));
    }
  }
  const Eigen::Index per_side = kPooled / kPatch;
  Mat tokens(kTokens, kTokenDim);
  for (Eigen::Index t = 0; t < kTokens; ++t)
    for (Eigen::Index r = 0; r < kPatch; ++r)
      for (Eigen::Index c = 0; c < kPatch; ++c)
        tokens(t, r * kPatch + c) = pooled((t / per_side) * kPatch + r, (t % per_side) * kPatch + c);
  return tokens;
}

Mat positional_table() {
  Mat p(kTokens, kTokenDim);
  for (Eigen::Index t = 0; t < kTokens; ++t)
    for (Eigen::Index i = 0; i < kTokenDim; i += 2) {
      const double freq = std::pow(10000.0, -static_cast<double>(i) / static_cast<double>(kTokenDim));
      p(t, i) = 0.1 * std::sin(static_cast<double>(t) * freq);
      p(t, i + 1) = 0.1 * std::cos(static_cast<double>(t) * freq);
    }
  return p;
}

ImageEncoder make_image_encoder(int lora_rank, double lora_alpha, double lora_dropout, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x696d67ULL}));
  const double sd = 1.0 / std::sqrt(static_cast<double>(kTokenDim));
  ImageEncoder e;
  e.pos = positional_table();
  e.Wq = gaussian(kTokenDim, kTokenDim, sd, rng);
  e.Wk = gaussian(kTokenDim, kTokenDim, sd, rng);
  e.Wv = gaussian(kTokenDim, kTokenDim, sd, rng);
  e.Wo = gaussian(kTokenDim, kTokenDim, sd, rng);
  e.bq = gaussian(kTokenDim, 1, 0.02, rng);
  e.bk = gaussian(kTokenDim, 1, 0.02, rng);
  e.bv = gaussian(kTokenDim, 1, 0.02, rng);
  e.bo = gaussian(kTokenDim, 1, 0.02, rng);
  e.lora_q = make_lora(kTokenDim, kTokenDim, lora_rank, lora_alpha, lora_dropout, LoraTarget::q_proj, rng);
  e.lora_v = make_lora(kTokenDim, kTokenDim, lora_rank, lora_alpha, lora_dropout, LoraTarget::v_proj, rng);
  e.Wout = gaussian(kEmbedDim, kTokenDim, sd, rng);
  e.bout = Vec::Zero(kEmbedDim);
  return e;
}

Vec encode_tokens(const ImageEncoder& enc, const Mat& tokens, bool train_mode, std::uint64_t seed,
                  ImageCache* cache) {
  if (tokens.rows() != enc.pos.rows() || tokens.cols() != enc.pos.cols())
    fail(ErrorKind::dimension, "encode_tokens: token matrix has the wrong shape");
  ImageCache local;
  ImageCache& c = cache ? *cache : local;
  c.X = tokens + enc.pos;
  c.Q = (c.X * enc.Wq.transpose()).rowwise() + enc.bq.transpose();
  c.K = (c.X * enc.Wk.transpose()).rowwise() + enc.bk.transpose();
  c.V = (c.X * enc.Wv.transpose()).rowwise() + enc.bv.transpose();
  if (enc.use_lora) {
    const auto dropped = [&](const LoraAdapter& a, std::uint64_t tag) {
      if (!train_mode || a.dropout == 0.0) return Mat(c.X);
      return Mat(c.X.cwiseProduct(dropout_mask(c.X.rows(), c.X.cols(), a.dropout, derive_seed(seed, {tag}))));
    };
    c.Xq = dropped(enc.lora_q, 1);
    c.Xv = dropped(enc.lora_v, 2);
    c.Uq = c.Xq * enc.lora_q.A.transpose();
    c.Uv = c.Xv * enc.lora_v.A.transpose();
    c.Q += enc.lora_q.scale() * (c.Uq * enc.lora_q.B.transpose());
    c.V += enc.lora_v.scale() * (c.Uv * enc.lora_v.B.transpose());
  }
  c.A = row_softmax(c.Q * c.K.transpose() * kAttnScale);
  c.H = c.A * c.V;
  const Mat O = (c.H * enc.Wo.transpose()).rowwise() + enc.bo.transpose();
  c.z = (c.X + O).colwise().mean().transpose();
  return enc.Wout * c.z + enc.bout;
}

Vec encode_slice(const ImageEncoder& enc, const mri::Slice2D& slice) {
  return encode_tokens(enc, pool_slice(slice), false, 0);
}

ImageGrads ImageGrads::zeros_like(const ImageEncoder& enc) {
  ImageGrads g;
  g.dAq = Mat::Zero(enc.lora_q.A.rows(), enc.lora_q.A.cols());
  g.dBq = Mat::Zero(enc.lora_q.B.rows(), enc.lora_q.B.cols());
  g.dAv = Mat::Zero(enc.lora_v.A.rows(), enc.lora_v.A.cols());
  g.dBv = Mat::Zero(enc.lora_v.B.rows(), enc.lora_v.B.cols());
  g.dWout = Mat::Zero(enc.Wout.rows(), enc.Wout.cols());
  g.dbout = Vec::Zero(enc.bout.size());
  return g;
}

void ImageGrads::add(const ImageGrads& o) {
  dAq += o.dAq;
  dBq += o.dBq;
  dAv += o.dAv;
  dBv += o.dBv;
  dWout += o.dWout;
  dbout += o.dbout;
}

void encode_tokens_backward(const ImageEncoder& enc, const ImageCache& c, const Vec& de, ImageGrads& g) {
  if (de.size() != enc.Wout.rows()) fail(ErrorKind::dimension, "encode_tokens_backward: bad gradient");
  g.dWout += de * c.z.transpose();
  g.dbout += de;
  const Vec dz = enc.Wout.transpose() * de;
  const Mat dO = Mat::Ones(c.X.rows(), 1) * (dz.transpose() / static_cast<double>(c.X.rows()));
  const Mat dH = dO * enc.Wo;
  const Mat dA = dH * c.V.transpose();
  const Mat dV = c.A.transpose() * dH;
  const Vec rs = dA.cwiseProduct(c.A).rowwise().sum();
  const Mat dS = c.A.cwiseProduct(dA.colwise() - rs);
  const Mat dQ = dS * c.K * kAttnScale;
  if (!enc.use_lora) return;
  const double sq = enc.lora_q.scale(), sv = enc.lora_v.scale();
  g.dBq += sq * dQ.transpose() * c.Uq;
  g.dAq += (sq * dQ * enc.lora_q.B).transpose() * c.Xq;
  g.dBv += sv * dV.transpose() * c.Uv;
  g.dAv += (sv * dV * enc.lora_v.B).transpose() * c.Xv;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SparseFeatures text_features(std::string_view text) {
  const auto tokens = metrics::tokenize(text);
  if (tokens.empty()) fail(ErrorKind::input, "encode_text: empty text");
  std::map<Eigen::Index, double> counts;
  for (const auto& t : tokens) counts[static_cast<Eigen::Index>(fnv1a64(t) % kTextBuckets)] += 1.0;
  double sq = 0.0;
  for (const auto& [k, v] : counts) sq += v * v;
  const double norm = std::sqrt(sq);
  SparseFeatures f;
  f.reserve(counts.size());
  for (const auto& [k, v] : counts) f.emplace_back(k, v / norm);
  return f;
}

TextEncoder make_text_encoder(std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x747874ULL}));
  TextEncoder e;
  e.W = gaussian(kEmbedDim, kTextBuckets, 1.0 / std::sqrt(static_cast<double>(kTokenDim)), rng);
  e.b = Vec::Zero(kEmbedDim);
  return e;
}

Vec encode_features(const TextEncoder& enc, const SparseFeatures& f) {
  Vec t = enc.b;
  for (const auto& [k, v] : f) {
    if (k < 0 || k >= enc.W.cols()) fail(ErrorKind::bounds, "text feature bucket out of range");
    t += v * enc.W.col(k);
  }
  return t;
}

Vec encode_text(const TextEncoder& enc, std::string_view text) { return encode_features(enc, text_features(text)); }

TextGrads TextGrads::zeros_like(const TextEncoder& enc) {
  return TextGrads{Mat::Zero(enc.W.rows(), enc.W.cols()), Vec::Zero(enc.b.size())};
}

void TextGrads::add(const TextGrads& o) {
  dW += o.dW;
  db += o.db;
}

void encode_features_backward(const SparseFeatures& f, const Vec& d_embed, TextGrads& g) {
  for (const auto& [k, v] : f) g.dW.col(k) += v * d_embed;
  g.db += d_embed;
}

}  // namespace neurorep::align
