// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "neurorep/align/encoders.hpp"
#include "neurorep/align/layers.hpp"
#include "neurorep/align/optim.hpp"

namespace neurorep::align {

struct Phase1Config {
  int epochs = 100;
  int batch = 64;
  double lr = 1e-5;
  double weight_decay = 0.01;
  int early_stop_patience = 10;
  double clip_norm = 1.0;
  int cosine_target = 1;
  int plateau_patience = 10;
  double plateau_factor = 0.5;
};

struct Phase2Config {
  int epochs = 100;
  int batch = 4;
  double lr = 1e-4;
  double weight_decay = 0.05;
  int early_stop_patience = 15;
  int plateau_patience = 10;
  double plateau_factor = 0.5;
  int max_tokens = 512;
  double proj_dropout = 0.2;
  double noise_sigma = 0.1;
  double synonym_rate = 0.1;
  int top_k = 10;
  double top_p = 0.9;
  double temperature = 0.6;
  int generate_words = 100;
};

struct LoraConfig {
  int rank = 10;
  double alpha = 32.0;
  double dropout = 0.3;
};

struct TrainConfig {
  Phase1Config phase1;
  Phase2Config phase2;
  LoraConfig lora;
  std::uint64_t seed = 0;

  // Config error on non-positive sizes or rates outside (0, 1].
  void validate() const;

  nlohmann::ordered_json to_json() const;
  // Missing keys keep defaults; unknown keys are a config error.
  static TrainConfig from_json(const nlohmann::json& j);
};

struct AlignmentModel {
  ImageEncoder image;
  TextEncoder text;
  Vec query;  // learned context for text-free aggregation
  ProjectionHead head;
};

AlignmentModel make_model(const TrainConfig& cfg);

// One patient: pooled slice tokens plus hashed report features.
struct PatientSample {
  std::string patient_id;
  std::vector<Mat> tokens;  // from pool_slice
  SparseFeatures features;
  std::string report;
};

PatientSample make_sample(std::string patient_id, std::span<const mri::Slice2D> slices, std::string report);

struct AlignmentGrads {
  ImageGrads image;
  TextGrads text;
  Vec query;

  static AlignmentGrads zeros_like(const AlignmentModel& m);
};

// Trainable blocks in a fixed order: image Aq, Bq, Av, Bv, Wout, bout,
// text W, b, then query.
ParamSpans trainable_params(AlignmentModel& m);
ParamSpans gradient_spans(AlignmentGrads& g);

// Phase-1 loss for one patient: cosine loss between the text-conditioned
// aggregate and the text embedding. Adds the gradients (including the
// query's auxiliary loss) to `grads` when it is non-null.
double patient_loss(const AlignmentModel& m, const PatientSample& s, int cosine_target, bool train_mode,
                    std::uint64_t seed, AlignmentGrads* grads);

// Auxiliary loss pulling query-weighted aggregation toward the text.
double query_loss(const AlignmentModel& m, const PatientSample& s, Vec* d_query);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;
};

struct AlignmentResult {
  AlignmentModel model;  // weights from the best validation epoch
  std::vector<EpochStats> curve;
  int best_epoch = 0;
  bool stopped_early = false;
};

// Config error when either split is empty.
AlignmentResult train_alignment(std::span<const PatientSample> train, std::span<const PatientSample> val,
                                const TrainConfig& cfg);

double mean_validation_loss(const AlignmentModel& m, std::span<const PatientSample> val, int cosine_target);

struct EmbeddingSet {
  std::string patient_id;
  Mat slice_embeddings;  // one row per slice
  Vec text_embedding;    // empty when the patient has no report
  Vec weights;
  Vec aggregated;
  Vec projected;
};

// Eval mode; aggregation uses the learned query.
EmbeddingSet embed_patient(const AlignmentModel& m, const PatientSample& s);

std::string curve_csv(std::span<const EpochStats> curve);
std::string embeddings_jsonl(std::span<const EmbeddingSet> sets);

}  // namespace neurorep::align
