// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

// neurorep command-line entry point.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "neurorep/align/model_io.hpp"
#include "neurorep/cohort.hpp"
#include "neurorep/error.hpp"
#include "neurorep/harness.hpp"
#include "neurorep/io.hpp"
#include "neurorep/mri.hpp"
#include "neurorep/report_synth.hpp"
#include "neurorep/rng.hpp"

namespace fs = std::filesystem;
using namespace neurorep;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";

  std::uint64_t seed_or(std::uint64_t fallback) const { return seed.value_or(fallback); }

  fs::path out_dir() const {
    if (out.empty()) fail(ErrorKind::config, "--out is required");
    return out;
  }

  nlohmann::json config_json() const {
    if (config.empty()) return nlohmann::json::object();
    try {
      return nlohmann::json::parse(read_text_file(config));
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorKind::config, config + ": " + e.what());
    }
  }
};

void emit(const Globals& g, const std::string& name, const std::string& csv, const nlohmann::ordered_json& json) {
  const std::string text = g.format == "json" ? json.dump(2) + "\n" : csv;
  std::cout << text;
  if (!g.out.empty()) write_text_file(fs::path(g.out) / (name + (g.format == "json" ? ".json" : ".csv")), text);
}

std::vector<std::string> slice_patients(const fs::path& dir) {
  std::vector<std::string> ids;
  if (!fs::is_directory(dir)) fail(ErrorKind::io, "not a directory: " + dir.string());
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") ids.push_back(e.path().stem().string());
  std::sort(ids.begin(), ids.end());
  if (ids.empty()) fail(ErrorKind::input, "no slice sidecars in " + dir.string());
  return ids;
}

harness::Split read_split(const fs::path& path) {
  const auto j = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail(ErrorKind::format, path.string() + ": not a JSON object");
  harness::Split s;
  try {
    s.train = j.at("train").get<std::vector<std::string>>();
    s.val = j.at("val").get<std::vector<std::string>>();
    s.test = j.at("test").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::schema, path.string() + ": need train, val and test id lists");
  }
  return s;
}

std::string table_csv(const std::array<double, 8>& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + std::string(metrics::kTableMetrics[i]);
  out += "\n";
  for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
  return out + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"neurorep: MRI report generation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "JSON config file");
  app.add_option("--seed", g.seed, "Base seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--format", g.format, "Table format")->check(CLI::IsMember({"csv", "json"}));

  // cohort
  auto* cohort_cmd = app.add_subcommand("cohort", "Build patient cohorts")->require_subcommand(1);
  std::size_t n_total = 24, n_complete = 20;
  int window = 365;
  auto* gen = cohort_cmd->add_subcommand("gen", "Generate synthetic source tables and the merged cohort");
  gen->add_option("--n-total", n_total, "Patients across the sources");
  gen->add_option("--n-complete", n_complete, "Patients that survive merging and filtering");
  gen->add_option("--window", window, "Max days between visit and MRI");
  std::string clinical_path, neuropsych_path, volumetrics_path;
  auto* ingest = cohort_cmd->add_subcommand("ingest", "Merge and filter source tables");
  ingest->add_option("--clinical", clinical_path)->required();
  ingest->add_option("--neuropsych", neuropsych_path)->required();
  ingest->add_option("--volumetrics", volumetrics_path)->required();
  ingest->add_option("--window", window, "Max days between visit and MRI");

  // reports
  auto* reports_cmd = app.add_subcommand("reports", "Templated reports")->require_subcommand(1);
  std::string cohort_path, reports_path;
  auto* synth = reports_cmd->add_subcommand("synth", "Render one report per patient");
  synth->add_option("--cohort", cohort_path, "cohort.jsonl")->required();
  auto* validate = reports_cmd->add_subcommand("validate", "Check word counts and sections");
  validate->add_option("--reports", reports_path, "reports.jsonl")->required();

  // mri
  auto* mri_cmd = app.add_subcommand("mri", "MRI preprocessing")->require_subcommand(1);
  std::vector<std::string> inputs;
  std::string patient_id;
  auto* pre = mri_cmd->add_subcommand("preprocess", "NIfTI volume to normalized slices");
  pre->add_option("--input", inputs, "NIfTI files")->required();
  pre->add_option("--patient-id", patient_id, "Id for a single input (default: file stem)");

  // align
  auto* align_cmd = app.add_subcommand("align", "Image-text alignment")->require_subcommand(1);
  std::string slices_dir, split_path, model_path;
  auto* train = align_cmd->add_subcommand("train", "Train alignment and decoder, generate test reports");
  train->add_option("--slices", slices_dir, "Directory written by mri preprocess")->required();
  train->add_option("--reports", reports_path, "reports.jsonl")->required();
  train->add_option("--split", split_path, "split.json (default: seeded 70/20/10)");
  auto* embed = align_cmd->add_subcommand("embed", "Embed patients with a trained model");
  embed->add_option("--model", model_path, "model.nram")->required();
  embed->add_option("--slices", slices_dir)->required();

  // score
  auto* score_cmd = app.add_subcommand("score", "Report scoring")->require_subcommand(1);
  std::string candidates_path, references_path, bleu_mode = "micro";
  std::size_t n_resamples = 1000;
  double ci = 0.95;
  auto* score_run = score_cmd->add_subcommand("run", "Score generated reports against references");
  score_run->add_option("--candidates", candidates_path)->required();
  score_run->add_option("--references", references_path)->required();
  score_run->add_option("--bleu-mode", bleu_mode)->check(CLI::IsMember({"micro", "macro"}));
  score_run->add_option("--resamples", n_resamples);
  score_run->add_option("--ci", ci);

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Result tables")->require_subcommand(1);
  std::string scores_path, model_name = "model";
  auto* quart = stats_cmd->add_subcommand("quartiles", "Quartiles of per-report scores");
  quart->add_option("--scores", scores_path, "Per-report score CSV")->required();
  quart->add_option("--model", model_name, "Model name when the CSV has no model column");
  std::vector<std::string> runs, ratios = harness::kDefaultRatios;
  auto* sweep = stats_cmd->add_subcommand("sweep", "Corpus scores per split ratio");
  sweep->add_option("--run", runs, "MODEL:RATIO:generated.jsonl")->required();
  sweep->add_option("--references", references_path)->required();
  sweep->add_option("--ratios", ratios);

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "End-to-end runs")->require_subcommand(1);
  auto* pipe_run = pipe_cmd->add_subcommand("run", "Run every stage from a config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      const fs::path out = g.out_dir();
      const auto src = cohort::generate_synthetic_sources(n_total, n_complete, g.seed_or(0));
      write_text_file(out / "clinical.csv", cohort::to_csv(src.clinical, cohort::clinical_schema()));
      write_text_file(out / "neuropsych.csv", cohort::to_csv(src.neuropsych, cohort::neuropsych_schema()));
      write_text_file(out / "volumetrics.csv", cohort::to_csv(src.volumetrics, cohort::volumetrics_schema()));
      const auto merged = cohort::merge_by_patient(src.clinical, src.neuropsych, src.volumetrics);
      const auto records = cohort::filter_complete(merged.candidates, window);
      write_text_file(out / "cohort.jsonl", cohort::to_jsonl(records));
      std::cout << records.size() << " patients\n";
    } else if (*ingest) {
      const fs::path out = g.out_dir();
      const auto merged = cohort::merge_by_patient(
          cohort::ingest_table(read_text_file(clinical_path), cohort::clinical_schema()),
          cohort::ingest_table(read_text_file(neuropsych_path), cohort::neuropsych_schema()),
          cohort::ingest_table(read_text_file(volumetrics_path), cohort::volumetrics_schema()));
      const auto records = cohort::filter_complete(merged.candidates, window);
      write_text_file(out / "cohort.jsonl", cohort::to_jsonl(records));
      std::cout << records.size() << " patients, " << merged.dropped_patients << " dropped in merge\n";
    } else if (*synth) {
      const fs::path out = g.out_dir();
      const auto records = cohort::read_cohort_jsonl(cohort_path);
      const auto reps = reports::render_cohort(records, g.seed_or(0));
      write_text_file(out / "reports.jsonl", reports::to_jsonl(reps));
      std::cout << reps.size() << " reports\n";
    } else if (*validate) {
      int bad = 0;
      for (const auto& r : reports::read_reports_jsonl(reports_path))
        for (const auto& problem : reports::validate_report(r)) {
          std::cout << r.patient_id << ": " << problem << "\n";
          ++bad;
        }
      if (bad) return 1;
      std::cout << "ok\n";
    } else if (*pre) {
      const fs::path out = g.out_dir();
      if (!patient_id.empty() && inputs.size() != 1)
        fail(ErrorKind::config, "--patient-id needs exactly one --input");
      const auto cfg = g.config_json();
      const auto opts = mri::PreprocessOptions::from_json(cfg.contains("preprocess") ? cfg["preprocess"] : cfg);
      for (const auto& in : inputs) {
        const std::string id = patient_id.empty() ? fs::path(in).stem().string() : patient_id;
        try {
          mri::write_slices(out, id, mri::preprocess_pipeline(mri::read_nifti_file(in), opts));
        } catch (const Error& e) {
          fail(e.kind(), fs::path(in).filename().string() + ": " + e.message());
        }
      }
      std::cout << inputs.size() << " volumes\n";
    } else if (*train) {
      const fs::path out = g.out_dir();
      auto cfg_json = g.config_json();
      if (g.seed) cfg_json["seed"] = *g.seed;
      const auto cfg = align::TrainConfig::from_json(cfg_json);
      cfg.validate();
      const auto texts = harness::read_text_jsonl(reports_path);
      std::vector<std::string> ids;
      for (const auto& [id, text] : texts) ids.push_back(id);
      const auto split = split_path.empty()
                             ? harness::split_dataset(ids, harness::SplitSpec::parse("70/20/10", cfg.seed))
                             : read_split(split_path);
      std::map<std::string, std::vector<mri::Slice2D>> slices;
      for (const auto* group : {&split.train, &split.val, &split.test})
        for (const auto& id : *group) slices[id] = mri::read_slices(slices_dir, id);
      const auto generated = harness::run_alignment(out, slices, texts, split, cfg);
      std::cout << generated.size() << " test reports generated\n";
    } else if (*embed) {
      const auto saved = align::load_model(model_path);
      std::vector<align::EmbeddingSet> sets;
      for (const auto& id : slice_patients(slices_dir)) {
        const auto slices = mri::read_slices(slices_dir, id);
        sets.push_back(align::embed_patient(saved.model, align::make_sample(id, slices, "")));
      }
      const auto text = align::embeddings_jsonl(sets);
      if (g.out.empty()) std::cout << text;
      else write_text_file(fs::path(g.out) / "embeddings.jsonl", text);
    } else if (*score_run) {
      metrics::CorpusOptions opts;
      opts.bleu_mode = bleu_mode == "macro" ? metrics::CorpusMode::macro : metrics::CorpusMode::micro;
      opts.n_resamples = n_resamples;
      opts.ci = ci;
      opts.seed = g.seed_or(0);
      const auto pairs =
          harness::pair_reports(harness::read_text_jsonl(candidates_path), harness::read_text_jsonl(references_path));
      const auto scored = metrics::score_corpus(pairs, metrics::MeteorResources::defaults(), opts);
      if (!g.out.empty())
        write_text_file(fs::path(g.out) / "per_report.csv", metrics::per_report_csv(pairs, scored.per_report));
      emit(g, "corpus", table_csv(metrics::table_row(scored.corpus)), metrics::corpus_json(scored.corpus));
    } else if (*quart) {
      const auto models = harness::read_score_csv(read_text_file(scores_path), model_name);
      const auto rows = harness::quartile_table(models);
      emit(g, "quartiles", harness::quartile_csv(rows), harness::quartile_json(rows));
    } else if (*sweep) {
      const auto refs = harness::read_text_jsonl(references_path);
      std::vector<harness::SweepRun> sweep_runs;
      for (const auto& r : runs) {
        const auto a = r.find(':');
        const auto b = a == std::string::npos ? a : r.find(':', a + 1);
        if (b == std::string::npos) fail(ErrorKind::config, "--run expects MODEL:RATIO:FILE, got '" + r + "'");
        sweep_runs.push_back(
            {r.substr(0, a), r.substr(a + 1, b - a - 1), harness::pair_reports(harness::read_text_jsonl(r.substr(b + 1)), refs)});
      }
      metrics::CorpusOptions opts;
      opts.seed = g.seed_or(0);
      const auto rows = harness::ratio_sweep(sweep_runs, ratios, metrics::MeteorResources::defaults(), opts);
      emit(g, "sweep", harness::sweep_csv(rows), harness::sweep_json(rows));
    } else if (*pipe_run) {
      if (g.config.empty()) fail(ErrorKind::config, "--config is required");
      const auto man = harness::run_pipeline(g.config, g.out_dir(), g.seed);
      for (const auto& s : man.stages)
        std::cout << s.name << ": " << s.status << (s.detail.empty() ? "" : " (" + s.detail + ")") << "\n";
      return man.exit_code();
    }
  } catch (const Error& e) {
    std::cerr << "neurorep: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "neurorep: internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
