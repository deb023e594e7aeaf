// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/metrics/panel.hpp"

#include "neurorep/csv.hpp"
#include "neurorep/error.hpp"
#include "neurorep/io.hpp"

namespace neurorep::metrics {

namespace {

ScorePanel score_tokens(const TokenSequence& cand, const TokenSequence& ref, const MeteorResources& res) {
  ScorePanel p;
  for (int n = 1; n <= 4; ++n) p.bleu[static_cast<std::size_t>(n - 1)] = bleu_n(cand, ref, n);
  p.rouge1 = rouge_n(cand, ref, 1).score;
  p.rouge2 = rouge_n(cand, ref, 2).score;
  p.rougeL = ref.empty() ? PRF{} : rouge_l(cand, ref);
  p.meteor = meteor(cand, ref, res);
  return p;
}

void put_interval(nlohmann::ordered_json& j, const std::string& prefix, const Interval& iv) {
  j[prefix + "_low"] = iv.low;
  j[prefix + "_mid"] = iv.mid;
  j[prefix + "_high"] = iv.high;
}

}  // namespace

ScorePanel score_panel(std::string_view cand_text, std::string_view ref_text, const MeteorResources& res) {
  return score_tokens(tokenize(cand_text), tokenize(ref_text), res);
}

ScoredCorpus score_corpus(std::span<const ReportPair> pairs, const MeteorResources& res, const CorpusOptions& opts) {
  if (pairs.empty()) fail(ErrorKind::input, "no report pairs to score");
  ScoredCorpus out;
  std::vector<SequencePair> seqs;
  seqs.reserve(pairs.size());
  for (const auto& pr : pairs) {
    seqs.push_back({tokenize(pr.candidate), tokenize(pr.reference)});
    out.per_report.push_back(score_tokens(seqs.back().candidate, seqs.back().reference, res));
  }

  auto& c = out.corpus;
  c.n_reports = pairs.size();
  c.bleu_mode = opts.bleu_mode;
  for (int n = 1; n <= 4; ++n) c.bleu[static_cast<std::size_t>(n - 1)] = corpus_bleu(seqs, n, opts.bleu_mode);

  std::vector<double> r1, r2, rl, met;
  for (const auto& p : out.per_report) {
    r1.push_back(p.rouge1.f);
    r2.push_back(p.rouge2.f);
    rl.push_back(p.rougeL.f);
    met.push_back(p.meteor);
  }
  c.rouge1 = bootstrap_aggregate(r1, opts.n_resamples, opts.ci, opts.seed);
  c.rouge2 = bootstrap_aggregate(r2, opts.n_resamples, opts.ci, opts.seed);
  c.rougeL = bootstrap_aggregate(rl, opts.n_resamples, opts.ci, opts.seed);
  double sum = 0.0;
  for (double v : met) sum += v;
  c.meteor_mean = sum / static_cast<double>(met.size());
  return out;
}

std::vector<std::string> per_report_csv_header() {
  return {"patient_id", "bleu_1",    "bleu_2",    "bleu_3",    "bleu_4",    "rouge_1_p", "rouge_1_r", "rouge_1_f",
          "rouge_2_p",  "rouge_2_r", "rouge_2_f", "rouge_l_p", "rouge_l_r", "rouge_l_f", "meteor"};
}

std::string per_report_csv(std::span<const ReportPair> pairs, std::span<const ScorePanel> panels) {
  if (pairs.size() != panels.size()) fail(ErrorKind::dimension, "pairs and panels differ in length");
  std::string out = csv::join(per_report_csv_header()) + "\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = panels[i];
    csv::Row row{pairs[i].patient_id};
    for (double b : p.bleu) row.push_back(format_double(b));
    for (const PRF* s : {&p.rouge1, &p.rouge2, &p.rougeL}) {
      row.push_back(format_double(s->precision));
      row.push_back(format_double(s->recall));
      row.push_back(format_double(s->f));
    }
    row.push_back(format_double(p.meteor));
    out += csv::join(row) + "\n";
  }
  return out;
}

nlohmann::ordered_json corpus_json(const CorpusScores& s) {
  nlohmann::ordered_json j;
  for (int n = 1; n <= 4; ++n) j["corpus_bleu_" + std::to_string(n)] = s.bleu[static_cast<std::size_t>(n - 1)];
  put_interval(j, "rouge_1", s.rouge1);
  put_interval(j, "rouge_2", s.rouge2);
  put_interval(j, "rouge_L", s.rougeL);
  j["meteor_mean"] = s.meteor_mean;
  j["n_reports"] = s.n_reports;
  j["bleu_mode"] = s.bleu_mode == CorpusMode::micro ? "micro" : "macro";
  return j;
}

std::array<double, 8> table_row(const CorpusScores& s) {
  return {s.bleu[0], s.bleu[1], s.bleu[2], s.bleu[3], s.rouge1.mid, s.rouge2.mid, s.rougeL.mid, s.meteor_mean};
}

std::array<double, 8> table_row(const ScorePanel& p) {
  return {p.bleu[0], p.bleu[1], p.bleu[2], p.bleu[3], p.rouge1.f, p.rouge2.f, p.rougeL.f, p.meteor};
}

}  // namespace neurorep::metrics
