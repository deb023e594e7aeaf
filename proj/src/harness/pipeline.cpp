// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <ctime>
#include <functional>
#include <map>

#include "neurorep/align/decoder.hpp"
#include "neurorep/align/model_io.hpp"
#include "neurorep/align/train.hpp"
#include "neurorep/error.hpp"
#include "neurorep/harness.hpp"
#include "neurorep/io.hpp"
#include "neurorep/report_synth.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CohortSettings {
  bool synthetic = true;
  std::size_t n_total = 24;
  std::size_t n_complete = 20;
  int window_days = 365;
  fs::path clinical, neuropsych, volumetrics;
};

struct MriSettings {
  std::size_t phantom_size = 32;
  double noise = 0.05;
  std::optional<fs::path> volumes_dir;
  mri::PreprocessOptions preprocess;
};

struct ScoreSettings {
  metrics::CorpusOptions opts;
};

struct Settings {
  std::uint64_t seed = 0;
  CohortSettings cohort;
  MriSettings mri;
  SplitSpec split;
  align::TrainConfig align;
  ScoreSettings score;
};

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(ErrorKind::config, std::string(where) + " must be an object");
  for (const auto& [k, v] : j.items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      fail(ErrorKind::config, "unknown key '" + k + "' in " + std::string(where));
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::config, std::string("bad value for '") + key + "'");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

Settings parse_settings(const json& cfg, const fs::path& base) {
  check_keys(cfg, "config", {"seed", "cohort", "mri", "split", "align", "score"});
  Settings s;
  s.seed = get_or<std::uint64_t>(cfg, "seed", 0);

  const json co = cfg.value("cohort", json::object());
  check_keys(co, "cohort", {"n_total", "n_complete", "window_days", "clinical", "neuropsych", "volumetrics"});
  s.cohort.window_days = get_or<int>(co, "window_days", 365);
  if (s.cohort.window_days < 0) fail(ErrorKind::config, "cohort.window_days must be non-negative");
  const bool any_file = co.contains("clinical") || co.contains("neuropsych") || co.contains("volumetrics");
  if (any_file) {
    if (!(co.contains("clinical") && co.contains("neuropsych") && co.contains("volumetrics")))
      fail(ErrorKind::config, "cohort needs all of clinical, neuropsych and volumetrics");
    if (co.contains("n_total") || co.contains("n_complete"))
      fail(ErrorKind::config, "cohort mixes source files with synthetic sizes");
    s.cohort.synthetic = false;
    s.cohort.clinical = resolve(base, get_or<std::string>(co, "clinical", ""));
    s.cohort.neuropsych = resolve(base, get_or<std::string>(co, "neuropsych", ""));
    s.cohort.volumetrics = resolve(base, get_or<std::string>(co, "volumetrics", ""));
  } else {
    s.cohort.n_total = get_or<std::size_t>(co, "n_total", 24);
    s.cohort.n_complete = get_or<std::size_t>(co, "n_complete", std::min<std::size_t>(20, s.cohort.n_total));
    if (s.cohort.n_complete == 0 || s.cohort.n_complete > s.cohort.n_total)
      fail(ErrorKind::config, "cohort.n_complete must be in 1..n_total");
  }

  const json mr = cfg.value("mri", json::object());
  check_keys(mr, "mri", {"phantom_size", "noise", "volumes_dir", "preprocess"});
  s.mri.phantom_size = get_or<std::size_t>(mr, "phantom_size", 32);
  s.mri.noise = get_or<double>(mr, "noise", 0.05);
  if (s.mri.phantom_size < 8) fail(ErrorKind::config, "mri.phantom_size must be at least 8");
  if (s.mri.noise < 0.0) fail(ErrorKind::config, "mri.noise must be non-negative");
  if (mr.contains("volumes_dir")) s.mri.volumes_dir = resolve(base, get_or<std::string>(mr, "volumes_dir", ""));
  s.mri.preprocess = mri::PreprocessOptions::from_json(mr.value("preprocess", json::object()));
  if (s.mri.preprocess.k_per_plane == 0 || (!s.mri.volumes_dir && s.mri.preprocess.k_per_plane > s.mri.phantom_size))
    fail(ErrorKind::config, "mri.preprocess.k_per_plane must be in 1..phantom_size");

  const json sp = cfg.value("split", json::object());
  check_keys(sp, "split", {"ratios"});
  s.split = SplitSpec::parse(get_or<std::string>(sp, "ratios", "70/20/10"), derive_seed(s.seed, {0x73706c}));

  json al = cfg.value("align", json::object());
  if (!al.is_object()) fail(ErrorKind::config, "align must be an object");
  if (!al.contains("seed")) al["seed"] = s.seed;
  s.align = align::TrainConfig::from_json(al);
  s.align.validate();

  const json sc = cfg.value("score", json::object());
  check_keys(sc, "score", {"bleu_mode", "n_resamples", "ci"});
  const auto mode = get_or<std::string>(sc, "bleu_mode", "micro");
  if (mode == "micro") s.score.opts.bleu_mode = metrics::CorpusMode::micro;
  else if (mode == "macro") s.score.opts.bleu_mode = metrics::CorpusMode::macro;
  else fail(ErrorKind::config, "score.bleu_mode must be micro or macro");
  s.score.opts.n_resamples = get_or<std::size_t>(sc, "n_resamples", 1000);
  s.score.opts.ci = get_or<double>(sc, "ci", 0.95);
  if (s.score.opts.n_resamples == 0) fail(ErrorKind::config, "score.n_resamples must be positive");
  if (!(s.score.opts.ci > 0.0 && s.score.opts.ci < 1.0)) fail(ErrorKind::config, "score.ci must be in (0, 1)");
  s.score.opts.seed = derive_seed(s.seed, {0x73636f});
  return s;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Everything the stages hand to each other.
struct RunState {
  std::vector<cohort::PatientRecord> cohort;
  std::map<std::string, std::string> reports;
  std::map<std::string, std::vector<mri::Slice2D>> slices;
  Split split;
  std::map<std::string, std::string> generated;
};

}  // namespace

mri::PhantomSpec phantom_spec_for(const cohort::PatientRecord& r, std::size_t size, std::size_t index) {
  mri::PhantomSpec spec;
  spec.n = size;
  spec.left_scale = r.hippocampus_left_mm3 / 3500.0;
  spec.right_scale = r.hippocampus_right_mm3 / 3500.0;
  spec.atrophy = std::clamp(r.cdr / 3.0, 0.0, 1.0);
  spec.orientation = index % 2 == 1 ? mri::parse_orientation("LPS") : mri::ras();
  return spec;
}

std::map<std::string, std::string> run_alignment(const fs::path& dir,
                                                 const std::map<std::string, std::vector<mri::Slice2D>>& slices,
                                                 const std::map<std::string, std::string>& reports,
                                                 const Split& split, const align::TrainConfig& cfg) {
  const auto samples_for = [&](const std::vector<std::string>& ids) {
    std::vector<align::PatientSample> out;
    for (const auto& id : ids) {
      const auto sl = slices.find(id);
      const auto rep = reports.find(id);
      if (sl == slices.end()) fail(ErrorKind::input, "no slices for patient " + id);
      if (rep == reports.end()) fail(ErrorKind::input, "no report for patient " + id);
      out.push_back(align::make_sample(id, sl->second, rep->second));
    }
    return out;
  };
  const auto train = samples_for(split.train);
  const auto val = samples_for(split.val);
  const auto test = samples_for(split.test);
  const auto phase1 = align::train_alignment(train, val, cfg);
  write_text_file(dir / "curves.csv", align::curve_csv(phase1.curve));

  const auto decoder_samples = [&](std::span<const align::PatientSample> ss) {
    std::vector<align::DecoderSample> out;
    for (const auto& p : ss) out.push_back({p.patient_id, align::embed_patient(phase1.model, p).aggregated, p.report});
    return out;
  };
  const auto phase2 = align::train_decoder(phase1.model.head, decoder_samples(train), decoder_samples(val), cfg,
                                           metrics::SynonymLexicon::builtin());
  write_text_file(dir / "decoder_curves.csv", align::curve_csv(phase2.curve));

  align::AlignmentModel model = phase1.model;
  model.head = phase2.head;
  align::save_model(dir / "model.nram", model, &phase2.decoder);

  std::vector<align::EmbeddingSet> sets;
  for (const auto* group : {&train, &val, &test})
    for (const auto& p : *group) sets.push_back(align::embed_patient(model, p));
  std::sort(sets.begin(), sets.end(),
            [](const align::EmbeddingSet& a, const align::EmbeddingSet& b) { return a.patient_id < b.patient_id; });
  write_text_file(dir / "embeddings.jsonl", align::embeddings_jsonl(sets));

  std::map<std::string, std::string> generated;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto emb = align::embed_patient(model, test[i]);
    generated[test[i].patient_id] = align::generate_report(model.head, phase2.decoder, emb.aggregated, cfg.phase2,
                                                           derive_seed(cfg.seed, {0x67656e, i}));
  }
  std::string lines;
  for (const auto& [id, text] : generated)
    lines += nlohmann::ordered_json{{"patient_id", id}, {"text", text}}.dump() + "\n";
  write_text_file(dir / "generated.jsonl", lines);
  return generated;
}

RunManifest run_pipeline(const fs::path& config_path, const fs::path& out_dir,
                         std::optional<std::uint64_t> seed_override) {
  json cfg;
  try {
    cfg = json::parse(read_text_file(config_path));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::config, "config is not valid JSON: " + std::string(e.what()));
  }
  if (seed_override) {
    if (!cfg.is_object()) fail(ErrorKind::config, "config must be an object");
    cfg["seed"] = *seed_override;
  }
  const Settings s = parse_settings(cfg, config_path.parent_path());

  RunManifest man;
  man.seed = s.seed;
  man.config_hash = sha256_hex(cfg.dump());
  man.started_at = utc_now();
  man.inputs[config_path.generic_string()] = sha256_file(config_path);
  if (!s.cohort.synthetic)
    for (const auto* p : {&s.cohort.clinical, &s.cohort.neuropsych, &s.cohort.volumetrics})
      man.inputs[p->generic_string()] = sha256_file(*p);
  if (s.mri.volumes_dir) {
    if (!fs::is_directory(*s.mri.volumes_dir))
      fail(ErrorKind::io, "volumes_dir not found: " + s.mri.volumes_dir->string());
    for (const auto& [rel, digest] : digest_tree(*s.mri.volumes_dir))
      man.inputs[(*s.mri.volumes_dir / rel).generic_string()] = digest;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create " + out_dir.string() + ": " + ec.message());
  for (const char* name : {"cohort", "reports", "mri", "align", "score", "split.json", "manifest.json"})
    fs::remove_all(out_dir / name);

  RunState st;

  const auto cohort_stage = [&] {
    const fs::path dir = out_dir / "cohort";
    std::vector<cohort::PartialRecord> clinical, neuropsych, volumetrics;
    if (s.cohort.synthetic) {
      const auto src = cohort::generate_synthetic_sources(s.cohort.n_total, s.cohort.n_complete,
                                                          derive_seed(s.seed, {0x636f68}));
      write_text_file(dir / "sources" / "clinical.csv", cohort::to_csv(src.clinical, cohort::clinical_schema()));
      write_text_file(dir / "sources" / "neuropsych.csv",
                      cohort::to_csv(src.neuropsych, cohort::neuropsych_schema()));
      write_text_file(dir / "sources" / "volumetrics.csv",
                      cohort::to_csv(src.volumetrics, cohort::volumetrics_schema()));
      clinical = cohort::ingest_table(read_text_file(dir / "sources" / "clinical.csv"), cohort::clinical_schema());
      neuropsych =
          cohort::ingest_table(read_text_file(dir / "sources" / "neuropsych.csv"), cohort::neuropsych_schema());
      volumetrics =
          cohort::ingest_table(read_text_file(dir / "sources" / "volumetrics.csv"), cohort::volumetrics_schema());
    } else {
      clinical = cohort::ingest_table(read_text_file(s.cohort.clinical), cohort::clinical_schema());
      neuropsych = cohort::ingest_table(read_text_file(s.cohort.neuropsych), cohort::neuropsych_schema());
      volumetrics = cohort::ingest_table(read_text_file(s.cohort.volumetrics), cohort::volumetrics_schema());
    }
    const auto merged = cohort::merge_by_patient(clinical, neuropsych, volumetrics);
    st.cohort = cohort::filter_complete(merged.candidates, s.cohort.window_days);
    if (st.cohort.size() < 3) fail(ErrorKind::input, "fewer than 3 complete patients");
    write_text_file(dir / "cohort.jsonl", cohort::to_jsonl(st.cohort));
    return std::to_string(st.cohort.size()) + " patients";
  };

  const auto reports_stage = [&] {
    const auto reps = reports::render_cohort(st.cohort, derive_seed(s.seed, {0x726570}));
    for (const auto& r : reps) {
      const auto problems = reports::validate_report(r);
      if (!problems.empty()) fail(ErrorKind::validation, r.patient_id + ": " + problems.front());
      st.reports[r.patient_id] = r.text;
    }
    write_text_file(out_dir / "reports" / "reports.jsonl", reports::to_jsonl(reps));
    return std::to_string(reps.size()) + " reports";
  };

  const auto mri_stage = [&] {
    const fs::path vol_dir = out_dir / "mri" / "volumes";
    const fs::path slice_dir = out_dir / "mri" / "slices";
    for (std::size_t i = 0; i < st.cohort.size(); ++i) {
      const auto& rec = st.cohort[i];
      fs::path file;
      if (s.mri.volumes_dir) {
        file = *s.mri.volumes_dir / (rec.patient_id + ".nii");
      } else {
        file = vol_dir / (rec.patient_id + ".nii");
        auto spec = phantom_spec_for(rec, s.mri.phantom_size, i);
        spec.noise = s.mri.noise;
        mri::write_nifti_file(file, mri::make_phantom(spec, derive_seed(s.seed, {0x6d7269, i})));
      }
      try {
        const auto slices = mri::preprocess_pipeline(mri::read_nifti_file(file), s.mri.preprocess);
        mri::write_slices(slice_dir, rec.patient_id, slices);
      } catch (const Error& e) {
        fail(e.kind(), file.filename().string() + ": " + e.message());
      }
    }
    for (const auto& rec : st.cohort) st.slices[rec.patient_id] = mri::read_slices(slice_dir, rec.patient_id);
    return std::to_string(st.cohort.size()) + " volumes";
  };

  const auto split_stage = [&] {
    std::vector<std::string> ids;
    for (const auto& rec : st.cohort) ids.push_back(rec.patient_id);
    std::sort(ids.begin(), ids.end());
    st.split = split_dataset(ids, s.split);
    write_text_file(out_dir / "split.json", to_json(st.split, s.split).dump(2) + "\n");
    return s.split.label() + " " + std::to_string(st.split.train.size()) + "/" +
           std::to_string(st.split.val.size()) + "/" + std::to_string(st.split.test.size());
  };

  const auto align_stage = [&] {
    st.generated = run_alignment(out_dir / "align", st.slices, st.reports, st.split, s.align);
    return std::to_string(st.generated.size()) + " generated";
  };

  const auto score_stage = [&] {
    const auto pairs = pair_reports(st.generated, st.reports);
    const auto scored = metrics::score_corpus(pairs, metrics::MeteorResources::defaults(), s.score.opts);
    write_text_file(out_dir / "score" / "per_report.csv", metrics::per_report_csv(pairs, scored.per_report));
    write_text_file(out_dir / "score" / "corpus.json", metrics::corpus_json(scored.corpus).dump(2) + "\n");
    return std::to_string(pairs.size()) + " pairs";
  };

  const std::vector<std::pair<std::string, std::function<std::string()>>> stages = {
      {"cohort", cohort_stage}, {"reports", reports_stage}, {"mri", mri_stage},
      {"split", split_stage},   {"align", align_stage},     {"score", score_stage}};

  bool failed = false;
  for (const auto& [name, run] : stages) {
    StageRecord rec{name, "skipped", "", 0};
    if (!failed) {
      try {
        rec.detail = run();
        rec.status = "ok";
      } catch (const Error& e) {
        rec.status = "failed";
        rec.detail = e.what();
        rec.exit_code = exit_code_for(e.kind());
        failed = true;
      } catch (const std::exception& e) {
        rec.status = "failed";
        rec.detail = e.what();
        rec.exit_code = 3;
        failed = true;
      }
    }
    man.stages.push_back(std::move(rec));
  }

  const std::vector<std::string> exclude = {"manifest.json"};
  man.artifacts = digest_tree(out_dir, exclude);
  man.finished_at = utc_now();
  write_text_file(out_dir / "manifest.json", man.to_json().dump(2) + "\n");
  return man;
}

}  // namespace neurorep::harness
