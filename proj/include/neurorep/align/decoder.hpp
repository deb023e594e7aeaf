// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neurorep/align/layers.hpp"
#include "neurorep/align/train.hpp"
#include "neurorep/metrics/lexicon.hpp"

namespace neurorep::align {

inline constexpr std::string_view kUnknownWord = "<unk>";

// Sorted word list; index 0 is <unk>.
class Vocabulary {
 public:
  Vocabulary() : words_{std::string(kUnknownWord)} {}

  static Vocabulary build(std::span<const std::string> texts);
  static Vocabulary from_words(std::vector<std::string> words);

  std::size_t lookup(std::string_view word) const;
  const std::vector<std::string>& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Unigram language head over the projected patient embedding.
struct Decoder {
  Vocabulary vocab;
  Mat W;  // vocab x projected dim
  Vec b;
};

Decoder make_decoder(Vocabulary vocab, Eigen::Index in_dim, std::uint64_t seed);

// Normalized token counts of the first max_tokens tokens.
Vec bag_of_words(const Vocabulary& vocab, std::string_view text, int max_tokens);

struct DecoderGrads {
  ProjectionGrads head;
  Mat dW;
  Vec db;
};

// Cross-entropy of softmax(W head(x) + b) against `target`.
double decoder_loss(const ProjectionHead& head, const Decoder& dec, const Vec& embedding, const Vec& target,
                    bool train_mode, std::uint64_t seed, DecoderGrads* grads);

struct DecoderSample {
  std::string patient_id;
  Vec embedding;  // aggregated, 512-d
  std::string report;
};

struct DecoderResult {
  ProjectionHead head;
  Decoder decoder;
  std::vector<EpochStats> curve;
  int best_epoch = 0;
  bool stopped_early = false;
};

// Phase 2: trains the projection head and language head with embedding
// noise and synonym replacement. Config error when a split is empty.
DecoderResult train_decoder(const ProjectionHead& head, std::span<const DecoderSample> train,
                            std::span<const DecoderSample> val, const TrainConfig& cfg,
                            const metrics::SynonymLexicon& lexicon);

// Draws generate_words (capped at max_tokens) words with the top-k/top-p
// sampler; <unk> is never emitted.
std::string generate_report(const ProjectionHead& head, const Decoder& dec, const Vec& embedding,
                            const Phase2Config& cfg, std::uint64_t seed);

}  // namespace neurorep::align
