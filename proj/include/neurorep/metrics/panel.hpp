// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "neurorep/metrics/bleu.hpp"
#include "neurorep/metrics/bootstrap.hpp"
#include "neurorep/metrics/meteor.hpp"
#include "neurorep/metrics/rouge.hpp"

namespace neurorep::metrics {

struct ScorePanel {
  std::array<double, 4> bleu{};  // BLEU-1..4
  PRF rouge1;
  PRF rouge2;
  PRF rougeL;
  double meteor = 0.0;
};

// Tokenizes both texts once and scores every metric from the same tokens.
ScorePanel score_panel(std::string_view cand_text, std::string_view ref_text, const MeteorResources& res);

struct ReportPair {
  std::string patient_id;
  std::string candidate;
  std::string reference;
};

struct CorpusScores {
  std::array<double, 4> bleu{};  // micro (count-summed) unless macro requested
  Interval rouge1;               // bootstrap over per-report F1
  Interval rouge2;
  Interval rougeL;
  double meteor_mean = 0.0;
  std::size_t n_reports = 0;
  CorpusMode bleu_mode = CorpusMode::micro;
};

struct CorpusOptions {
  CorpusMode bleu_mode = CorpusMode::micro;
  std::size_t n_resamples = 1000;
  double ci = 0.95;
  std::uint64_t seed = 0;
};

struct ScoredCorpus {
  std::vector<ScorePanel> per_report;  // same order as the input pairs
  CorpusScores corpus;
};

ScoredCorpus score_corpus(std::span<const ReportPair> pairs, const MeteorResources& res,
                          const CorpusOptions& opts = {});

// Per-report CSV: header plus one row per pair.
std::vector<std::string> per_report_csv_header();
std::string per_report_csv(std::span<const ReportPair> pairs, std::span<const ScorePanel> panels);

nlohmann::ordered_json corpus_json(const CorpusScores& scores);

// Table column order: BLEU-1..4, ROUGE-1, ROUGE-2, ROUGE-L, METEOR.
inline constexpr std::array<std::string_view, 8> kTableMetrics = {
    "BLEU-1", "BLEU-2", "BLEU-3", "BLEU-4", "ROUGE-1", "ROUGE-2", "ROUGE-L", "METEOR"};

// Corpus values in kTableMetrics order; ROUGE entries use the bootstrap mid.
std::array<double, 8> table_row(const CorpusScores& scores);

// Per-report values in kTableMetrics order; ROUGE entries use F1.
std::array<double, 8> table_row(const ScorePanel& panel);

}  // namespace neurorep::metrics
