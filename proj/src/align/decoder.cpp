// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/align/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "neurorep/align/augment.hpp"
#include "neurorep/align/sampler.hpp"
#include "neurorep/error.hpp"
#include "neurorep/metrics/tokenize.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::align {

namespace {

std::span<double> span_of(Mat& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> span_of(Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

ParamSpans phase2_params(ProjectionHead& h, Decoder& d) {
  return {span_of(h.W), span_of(h.b), span_of(h.gain), span_of(h.bias), span_of(d.W), span_of(d.b)};
}

ParamSpans phase2_grads(DecoderGrads& g) {
  return {span_of(g.head.dW),    span_of(g.head.db), span_of(g.head.dgain),
          span_of(g.head.dbias), span_of(g.dW),      span_of(g.db)};
}

DecoderGrads zero_grads(const ProjectionHead& h, const Decoder& d) {
  DecoderGrads g;
  g.head.dW = Mat::Zero(h.W.rows(), h.W.cols());
  g.head.db = Vec::Zero(h.b.size());
  g.head.dgain = Vec::Zero(h.gain.size());
  g.head.dbias = Vec::Zero(h.bias.size());
  g.dW = Mat::Zero(d.W.rows(), d.W.cols());
  g.db = Vec::Zero(d.b.size());
  return g;
}

double mean_loss(const ProjectionHead& head, const Decoder& dec, std::span<const DecoderSample> samples,
                 int max_tokens) {
  double sum = 0.0;
  for (const auto& s : samples)
    sum += decoder_loss(head, dec, s.embedding, bag_of_words(dec.vocab, s.report, max_tokens), false, 0, nullptr);
  return sum / static_cast<double>(samples.size());
}

}  // namespace

Vocabulary Vocabulary::from_words(std::vector<std::string> words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  Vocabulary v;
  for (auto& w : words) {
    if (w == kUnknownWord) continue;
    if (w.empty()) fail(ErrorKind::input, "vocabulary word is empty");
    v.words_.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < v.words_.size(); ++i) v.index_.emplace(v.words_[i], i);
  return v;
}

Vocabulary Vocabulary::build(std::span<const std::string> texts) {
  std::vector<std::string> words;
  for (const auto& t : texts)
    for (const auto& w : metrics::tokenize(t)) words.push_back(w);
  return from_words(std::move(words));
}

std::size_t Vocabulary::lookup(std::string_view word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? 0 : it->second;
}

Decoder make_decoder(Vocabulary vocab, Eigen::Index in_dim, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x646563ULL}));
  Decoder d;
  d.vocab = std::move(vocab);
  const auto n = static_cast<Eigen::Index>(d.vocab.size());
  d.W.resize(n, in_dim);
  const double sd = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (Eigen::Index i = 0; i < d.W.size(); ++i) d.W.data()[i] = sd * rng.normal();
  d.b = Vec::Zero(n);
  return d;
}

Vec bag_of_words(const Vocabulary& vocab, std::string_view text, int max_tokens) {
  const auto tokens = metrics::tokenize(text);
  if (tokens.empty()) fail(ErrorKind::input, "decoder target text is empty");
  const std::size_t n = std::min(tokens.size(), static_cast<std::size_t>(std::max(max_tokens, 1)));
  Vec q = Vec::Zero(static_cast<Eigen::Index>(vocab.size()));
  for (std::size_t i = 0; i < n; ++i) q[static_cast<Eigen::Index>(vocab.lookup(tokens[i]))] += 1.0;
  return q / static_cast<double>(n);
}

double decoder_loss(const ProjectionHead& head, const Decoder& dec, const Vec& embedding, const Vec& target,
                    bool train_mode, std::uint64_t seed, DecoderGrads* grads) {
  if (target.size() != dec.W.rows()) fail(ErrorKind::dimension, "decoder target has the wrong size");
  ProjectionCache cache;
  const Vec h = project_embedding(embedding, head, train_mode, seed, &cache);
  const Vec logits = dec.W * h + dec.b;
  const double hi = logits.maxCoeff();
  const double log_z = hi + std::log((logits.array() - hi).exp().sum());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < target.size(); ++i)
    if (target[i] != 0.0) loss -= target[i] * (logits[i] - log_z);
  if (grads) {
    const Vec dlogits = (logits.array() - log_z).exp().matrix() - target;
    grads->dW += dlogits * h.transpose();
    grads->db += dlogits;
    const ProjectionGrads pg = projection_backward(head, cache, dec.W.transpose() * dlogits);
    grads->head.dW += pg.dW;
    grads->head.db += pg.db;
    grads->head.dgain += pg.dgain;
    grads->head.dbias += pg.dbias;
    grads->head.dx = pg.dx;
  }
  return loss;
}

DecoderResult train_decoder(const ProjectionHead& head_init, std::span<const DecoderSample> train,
                            std::span<const DecoderSample> val, const TrainConfig& cfg,
                            const metrics::SynonymLexicon& lexicon) {
  cfg.validate();
  if (train.empty()) fail(ErrorKind::config, "decoder training split is empty");
  if (val.empty()) fail(ErrorKind::config, "decoder validation split is empty");
  const auto& p2 = cfg.phase2;

  std::vector<std::string> texts;
  for (const auto& s : train) texts.push_back(s.report);
  ProjectionHead head = head_init;
  head.dropout = p2.proj_dropout;
  Decoder dec = make_decoder(Vocabulary::build(texts), head.W.rows(), derive_seed(cfg.seed, {4}));

  DecoderResult result{head, dec, {}, 0, false};
  DecoderGrads grads = zero_grads(head, dec);
  const ParamSpans params = phase2_params(head, dec);
  const ParamSpans gspans = phase2_grads(grads);
  AdamW opt(p2.lr, p2.weight_decay);
  PlateauScheduler sched{p2.plateau_patience, p2.plateau_factor};
  EarlyStopping stopper{p2.early_stop_patience};

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = static_cast<std::size_t>(p2.batch);
  for (int epoch = 1; epoch <= p2.epochs; ++epoch) {
    Rng shuffle(derive_seed(cfg.seed, {0x70320000ULL, static_cast<std::uint64_t>(epoch)}));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.uniform_index(i)]);

    const double lr_used = opt.lr();
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      for (const auto& g : gspans) std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t i = start; i < stop; ++i) {
        const auto& s = train[order[i]];
        const std::uint64_t base = derive_seed(cfg.seed, {0x70320001ULL, static_cast<std::uint64_t>(epoch), order[i]});
        const Vec x = augment_embedding(s.embedding, p2.noise_sigma, derive_seed(base, {1}));
        const std::string text = augment_text(s.report, p2.synonym_rate, lexicon, derive_seed(base, {2}));
        loss_sum += decoder_loss(head, dec, x, bag_of_words(dec.vocab, text, p2.max_tokens), true,
                                 derive_seed(base, {3}), &grads);
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (const auto& g : gspans)
        for (double& x : g) x *= inv;
      opt.step(params, gspans);
    }

    EpochStats st{epoch, loss_sum / static_cast<double>(train.size()), mean_loss(head, dec, val, p2.max_tokens),
                  lr_used};
    result.curve.push_back(st);
    const bool stop = stopper.step(st.val_loss, epoch);
    if (stopper.improved_last) {
      result.head = head;
      result.decoder = dec;
      result.best_epoch = epoch;
    }
    opt.set_lr(sched.step(st.val_loss, opt.lr()));
    if (stop) {
      result.stopped_early = epoch < p2.epochs;
      break;
    }
  }
  return result;
}

std::string generate_report(const ProjectionHead& head, const Decoder& dec, const Vec& embedding,
                            const Phase2Config& cfg, std::uint64_t seed) {
  if (dec.vocab.size() < 2) fail(ErrorKind::input, "decoder vocabulary is empty");
  const Vec h = project_embedding(embedding, head, false, 0);
  Vec logits = dec.W * h + dec.b;
  logits[0] = -std::numeric_limits<double>::infinity();
  const SamplerConfig sc{static_cast<std::size_t>(cfg.top_k), cfg.top_p, cfg.temperature};
  const int n = std::min(cfg.generate_words, cfg.max_tokens);
  Rng rng(seed);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += dec.vocab.words()[sample_top_k_top_p(std::span<const double>(logits.data(), logits.size()), sc, rng)];
  }
  return out;
}

}  // namespace neurorep::align
