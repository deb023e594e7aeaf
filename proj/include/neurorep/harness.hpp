// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "neurorep/align/train.hpp"
#include "neurorep/cohort.hpp"
#include "neurorep/metrics/panel.hpp"
#include "neurorep/mri.hpp"

namespace neurorep::harness {

// --- splits ----------------------------------------------------------------

// Ratios as integer parts, e.g. 70/20/10; each part must be positive.
struct SplitSpec {
  std::array<std::uint64_t, 3> parts{70, 20, 10};
  std::uint64_t seed = 0;

  static SplitSpec parse(std::string_view ratios, std::uint64_t seed = 0);  // "70/20/10"
  std::string label() const;
  void validate() const;
};

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

// Seeded Fisher-Yates shuffle of the ids, then floor / floor / remainder
// sizes. Ids must be sorted and unique; config error if a part is empty.
Split split_dataset(std::span<const std::string> sorted_ids, const SplitSpec& spec);

nlohmann::ordered_json to_json(const Split& s, const SplitSpec& spec);

// --- quartiles ---------------------------------------------------------------

struct Quartiles {
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
};

// Linear-interpolation percentiles; input error when empty.
Quartiles quartile_stats(std::span<const double> values);

// Rows of the quartile table and their per-report CSV columns.
inline constexpr std::array<std::string_view, 5> kQuartileMetrics = {"BLEU-1", "BLEU-4", "ROUGE-1", "ROUGE-L",
                                                                      "METEOR"};
inline constexpr std::array<std::string_view, 5> kQuartileColumns = {"bleu_1", "bleu_4", "rouge_1_f", "rouge_l_f",
                                                                      "meteor"};

struct ModelScores {
  std::string model;
  std::map<std::string, std::vector<double>, std::less<>> columns;
};

// Per-report score CSV. Rows are grouped by an optional "model" column,
// otherwise everything belongs to `default_model`. Models keep their order
// of first appearance.
std::vector<ModelScores> read_score_csv(std::string_view text, const std::string& default_model);

struct QuartileRow {
  std::string metric;
  std::string model;
  Quartiles q;
};

// Metric-major: every model for BLEU-1, then BLEU-4, and so on.
std::vector<QuartileRow> quartile_table(std::span<const ModelScores> models);
std::string quartile_csv(std::span<const QuartileRow> rows);
nlohmann::ordered_json quartile_json(std::span<const QuartileRow> rows);

// --- ratio sweep ----------------------------------------------------------

inline const std::vector<std::string> kDefaultRatios = {"60/30/10", "70/20/10", "80/10/10"};

struct SweepRun {
  std::string model;
  std::string ratio;
  std::vector<metrics::ReportPair> pairs;
};

struct SweepRow {
  std::string model;
  std::string ratio;
  std::optional<std::array<double, 8>> values;  // empty when the run is missing
};

// One row per (model, ratio); models in order of first appearance, ratios
// in the given order.
std::vector<SweepRow> ratio_sweep(std::span<const SweepRun> runs, std::span<const std::string> ratios,
                                  const metrics::MeteorResources& res, const metrics::CorpusOptions& opts = {});
std::string sweep_csv(std::span<const SweepRow> rows);
nlohmann::ordered_json sweep_json(std::span<const SweepRow> rows);

// {"patient_id", "text"} lines; ambiguity error on a repeated id.
std::map<std::string, std::string> read_text_jsonl(const std::filesystem::path& path);

// Candidates joined to references by patient id, in candidate id order.
// Input error when a candidate has no reference.
std::vector<metrics::ReportPair> pair_reports(const std::map<std::string, std::string>& candidates,
                                              const std::map<std::string, std::string>& references);

// --- manifest and pipeline ---------------------------------------------------

struct StageRecord {
  std::string name;
  std::string status;  // ok, failed or skipped
  std::string detail;
  int exit_code = 0;  // CLI exit code of a failed stage
};

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;     // path -> sha256
  std::vector<StageRecord> stages;
  std::map<std::string, std::string> artifacts;  // path relative to the output dir -> sha256
  std::string started_at;
  std::string finished_at;

  nlohmann::ordered_json to_json() const;
  bool ok() const;
  int exit_code() const;  // first failed stage's code, 0 when all ran
};

// sha256 of every regular file under `dir` (relative paths), skipping
// `exclude` names at the top level.
std::map<std::string, std::string> digest_tree(const std::filesystem::path& dir,
                                               std::span<const std::string> exclude = {});

// Phantom whose hippocampal blobs scale with the record's volumes and whose
// atrophy follows its CDR. Odd-numbered patients are stored LPS.
mri::PhantomSpec phantom_spec_for(const cohort::PatientRecord& r, std::size_t size, std::size_t index);

// Phase-1 alignment on split.train/val, phase-2 decoder on their aggregated
// embeddings, then one generated report per test patient. Writes model.nram,
// curves.csv, decoder_curves.csv, embeddings.jsonl and generated.jsonl into
// `dir` and returns the generated texts by patient id.
std::map<std::string, std::string> run_alignment(const std::filesystem::path& dir,
                                                 const std::map<std::string, std::vector<mri::Slice2D>>& slices,
                                                 const std::map<std::string, std::string>& reports,
                                                 const Split& split, const align::TrainConfig& cfg);

// Runs cohort, reports, mri, split, align and score into `out_dir` and
// writes out_dir/manifest.json. A failing stage is recorded and the stages
// after it are skipped; configuration errors are thrown before any stage runs.
// Relative paths in the config resolve against the config file's directory.
RunManifest run_pipeline(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                         std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace neurorep::harness
