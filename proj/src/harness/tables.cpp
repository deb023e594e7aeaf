// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <set>

#include "neurorep/csv.hpp"
#include "neurorep/error.hpp"
#include "neurorep/harness.hpp"
#include "neurorep/io.hpp"
#include "neurorep/stats.hpp"

namespace neurorep::harness {

namespace {

double parse_score(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrorKind::format, "score table line " + std::to_string(line) + ": '" + s + "' is not a number");
  if (!std::isfinite(v)) fail(ErrorKind::numeric, "score table line " + std::to_string(line) + ": non-finite value");
  return v;
}

// Table cells: 12 significant digits, enough for scores and free of
// interpolation rounding noise.
std::string cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

Quartiles quartile_stats(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::input, "quartiles of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted)
    if (!std::isfinite(v)) fail(ErrorKind::numeric, "quartiles of a non-finite value");
  std::sort(sorted.begin(), sorted.end());
  return {percentile_sorted(sorted, 25.0), percentile_sorted(sorted, 50.0), percentile_sorted(sorted, 75.0)};
}

std::vector<ModelScores> read_score_csv(std::string_view text, const std::string& default_model) {
  const auto rows = csv::parse(text);
  if (rows.empty()) fail(ErrorKind::input, "score table is empty");
  const auto& header = rows.front();
  std::optional<std::size_t> model_col;
  std::vector<std::pair<std::size_t, std::string>> numeric;
  std::set<std::string> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!seen.insert(header[c]).second) fail(ErrorKind::schema, "duplicate column " + header[c]);
    if (header[c] == "model") {
      model_col = c;
    } else if (header[c] != "patient_id") {
      numeric.emplace_back(c, header[c]);
    }
  }
  for (auto col : kQuartileColumns)
    if (!seen.count(std::string(col))) fail(ErrorKind::schema, "score table lacks column " + std::string(col));

  std::vector<ModelScores> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size())
      fail(ErrorKind::schema, "score table line " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                                  " fields, expected " + std::to_string(header.size()));
    const std::string model = model_col ? row[*model_col] : default_model;
    auto it = std::find_if(out.begin(), out.end(), [&](const ModelScores& m) { return m.model == model; });
    if (it == out.end()) {
      out.push_back({model, {}});
      it = out.end() - 1;
    }
    for (const auto& [c, name] : numeric) it->columns[name].push_back(parse_score(row[c], r + 1));
  }
  if (out.empty()) fail(ErrorKind::input, "score table has no rows");
  return out;
}

std::vector<QuartileRow> quartile_table(std::span<const ModelScores> models) {
  if (models.empty()) fail(ErrorKind::input, "no score tables given");
  std::vector<QuartileRow> rows;
  for (std::size_t m = 0; m < kQuartileMetrics.size(); ++m)
    for (const auto& ms : models) {
      const auto it = ms.columns.find(kQuartileColumns[m]);
      if (it == ms.columns.end())
        fail(ErrorKind::schema, ms.model + ": missing column " + std::string(kQuartileColumns[m]));
      rows.push_back({std::string(kQuartileMetrics[m]), ms.model, quartile_stats(it->second)});
    }
  return rows;
}

std::string quartile_csv(std::span<const QuartileRow> rows) {
  std::string out = "metric,model,q25,median,q75\n";
  for (const auto& r : rows)
    out += csv::join({r.metric, r.model, cell(r.q.q25), cell(r.q.median), cell(r.q.q75)}) +
           "\n";
  return out;
}

nlohmann::ordered_json quartile_json(std::span<const QuartileRow> rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    arr.push_back({{"metric", r.metric}, {"model", r.model}, {"q25", r.q.q25}, {"median", r.q.median}, {"q75", r.q.q75}});
  return arr;
}

std::vector<SweepRow> ratio_sweep(std::span<const SweepRun> runs, std::span<const std::string> ratios,
                                  const metrics::MeteorResources& res, const metrics::CorpusOptions& opts) {
  std::vector<std::string> models;
  for (const auto& r : runs) {
    if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
    if (std::find(ratios.begin(), ratios.end(), r.ratio) == ratios.end())
      fail(ErrorKind::config, "run " + r.model + " uses ratio " + r.ratio + " outside the sweep");
  }
  std::vector<SweepRow> rows;
  for (const auto& model : models)
    for (const auto& ratio : ratios) {
      SweepRow row{model, ratio, std::nullopt};
      const SweepRun* run = nullptr;
      for (const auto& r : runs)
        if (r.model == model && r.ratio == ratio) {
          if (run) fail(ErrorKind::ambiguity, "two runs for " + model + " at " + ratio);
          run = &r;
        }
      if (run && !run->pairs.empty()) row.values = metrics::table_row(metrics::score_corpus(run->pairs, res, opts).corpus);
      rows.push_back(std::move(row));
    }
  return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  csv::Row header{"model", "ratio"};
  for (auto m : metrics::kTableMetrics) header.emplace_back(m);
  std::string out = csv::join(header) + "\n";
  for (const auto& r : rows) {
    csv::Row row{r.model, r.ratio};
    for (std::size_t i = 0; i < 8; ++i) row.push_back(r.values ? cell((*r.values)[i]) : "NA");
    out += csv::join(row) + "\n";
  }
  return out;
}

nlohmann::ordered_json sweep_json(std::span<const SweepRow> rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j{{"model", r.model}, {"ratio", r.ratio}};
    for (std::size_t i = 0; i < 8; ++i) {
      const std::string key(metrics::kTableMetrics[i]);
      if (r.values) {
        j[key] = (*r.values)[i];
      } else {
        j[key] = nullptr;
      }
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

std::map<std::string, std::string> read_text_jsonl(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::format, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("patient_id") || !j.contains("text") || !j["patient_id"].is_string() ||
        !j["text"].is_string())
      fail(ErrorKind::schema, path.string() + ":" + std::to_string(line_no) + ": need string patient_id and text");
    const auto id = j["patient_id"].get<std::string>();
    if (!out.emplace(id, j["text"].get<std::string>()).second)
      fail(ErrorKind::ambiguity, path.string() + ": patient " + id + " appears twice");
  }
  return out;
}

std::vector<metrics::ReportPair> pair_reports(const std::map<std::string, std::string>& candidates,
                                              const std::map<std::string, std::string>& references) {
  std::vector<metrics::ReportPair> pairs;
  for (const auto& [id, text] : candidates) {
    const auto it = references.find(id);
    if (it == references.end()) fail(ErrorKind::input, "no reference report for " + id);
    pairs.push_back({id, text, it->second});
  }
  return pairs;
}

}  // namespace neurorep::harness
