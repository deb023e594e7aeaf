// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "neurorep/harness.hpp"
#include "neurorep/io.hpp"
#include "neurorep/rng.hpp"
#include "test_support.hpp"

using namespace neurorep;
using namespace neurorep::harness;

namespace {

// Sort, then interpolate between the two ranks around p (n - 1).
double oracle_percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

const char* kScoreHeader =
    "patient_id,bleu_1,bleu_2,bleu_3,bleu_4,rouge_1_p,rouge_1_r,rouge_1_f,rouge_2_p,rouge_2_r,rouge_2_f,"
    "rouge_l_p,rouge_l_r,rouge_l_f,meteor\n";

}  // namespace

TEST_CASE("quartile examples") {
  const std::vector<double> v = {1, 2, 3, 4};
  const auto q = quartile_stats(v);
  CHECK(q.q25 == 1.75);
  CHECK(q.median == 2.5);
  CHECK(q.q75 == 3.25);

  const std::vector<double> one = {0.4};
  const auto q1 = quartile_stats(one);
  CHECK(q1.q25 == 0.4);
  CHECK(q1.median == 0.4);
  CHECK(q1.q75 == 0.4);

  const std::vector<double> shuffled = {4, 1, 3, 2};
  CHECK(quartile_stats(shuffled).q25 == 1.75);

  CHECK_THROWS_KIND(quartile_stats(std::vector<double>{}), ErrorKind::input);
}

TEST_CASE("quartiles agree with a sort-and-interpolate oracle") {
  Rng rng(404);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(1 + rng.uniform_index(60));
    for (auto& x : v) x = rng.uniform() * 10.0 - 5.0;
    const auto q = quartile_stats(v);
    CHECK(std::abs(q.q25 - oracle_percentile(v, 0.25)) <= 1e-12);
    CHECK(std::abs(q.median - oracle_percentile(v, 0.5)) <= 1e-12);
    CHECK(std::abs(q.q75 - oracle_percentile(v, 0.75)) <= 1e-12);
    CHECK(q.q25 <= q.median);
    CHECK(q.median <= q.q75);
  }
}

TEST_CASE("quartile table from a score csv") {
  std::string text = kScoreHeader;
  for (int i = 0; i < 4; ++i) {
    const std::string v = std::to_string(i + 1);
    text += "p" + v;
    for (int c = 0; c < 14; ++c) text += "," + v;
    text += "\n";
  }
  const auto models = read_score_csv(text, "toy");
  REQUIRE(models.size() == 1);
  CHECK(models[0].model == "toy");
  const auto rows = quartile_table(models);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].metric == "BLEU-1");
  CHECK(rows[4].metric == "METEOR");
  CHECK(rows[2].q.median == 2.5);
  const auto csv = quartile_csv(rows);
  CHECK(csv.rfind("metric,model,q25,median,q75\nBLEU-1,toy,1.75,2.5,3.25\n", 0) == 0);
  CHECK(quartile_json(rows)[3]["metric"] == "ROUGE-L");
}

TEST_CASE("score csv groups by model column") {
  const auto models = read_score_csv(read_text_file(test_data("per_report_scores.csv")), "x");
  REQUIRE(models.size() == 2);
  CHECK(models[0].model == "base");
  CHECK(models[0].columns.at("bleu_1").size() == 8);
  CHECK(models[1].columns.at("meteor").size() == 6);
  const auto rows = quartile_table(models);
  CHECK(rows.size() == 10);
  CHECK(rows[0].model == "base");
  CHECK(rows[1].model == "large");
  CHECK(rows[1].metric == "BLEU-1");
}

TEST_CASE("score csv errors") {
  CHECK_THROWS_KIND(read_score_csv("patient_id,bleu_1\np,0.1\n", "m"), ErrorKind::schema);
  std::string bad = kScoreHeader;
  bad += "p1,x,1,1,1,1,1,1,1,1,1,1,1,1,1\n";
  CHECK_THROWS_KIND(read_score_csv(bad, "m"), ErrorKind::format);
  std::string short_row = kScoreHeader;
  short_row += "p1,1,1\n";
  CHECK_THROWS_KIND(read_score_csv(short_row, "m"), ErrorKind::schema);
  CHECK_THROWS_KIND(read_score_csv(kScoreHeader, "m"), ErrorKind::input);
}

TEST_CASE("ratio sweep") {
  const auto res = metrics::MeteorResources::defaults();
  metrics::CorpusOptions opts;
  opts.n_resamples = 50;
  const std::vector<metrics::ReportPair> same = {
      {"a", "mild atrophy of the left hippocampus", "mild atrophy of the left hippocampus"},
      {"b", "no acute findings are seen today", "no acute findings are seen today"}};
  std::vector<SweepRun> runs;
  for (const auto& r : kDefaultRatios) runs.push_back({"toy", r, same});
  const auto rows = ratio_sweep(runs, kDefaultRatios, res, opts);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    REQUIRE(row.values);
    for (std::size_t i = 0; i < 7; ++i) CHECK((*row.values)[i] == 1.0);
  }
  const auto csv = sweep_csv(rows);
  CHECK(csv.rfind("model,ratio,BLEU-1,BLEU-2,BLEU-3,BLEU-4,ROUGE-1,ROUGE-2,ROUGE-L,METEOR\n", 0) == 0);
}

TEST_CASE("sweep ranks the closest run first on BLEU-4") {
  const auto res = metrics::MeteorResources::defaults();
  metrics::CorpusOptions opts;
  opts.n_resamples = 50;
  const std::string ref = "the left hippocampus shows moderate volume loss with widened temporal horns";
  const std::vector<SweepRun> runs = {
      {"toy", "60/30/10", {{"a", "the left hippocampus shows volume loss and small temporal horns", ref}}},
      {"toy", "70/20/10", {{"a", "the left hippocampus shows moderate volume loss with widened horns", ref}}},
      {"toy", "80/10/10", {{"a", "hippocampus shows some loss with horns widened in the temporal lobe", ref}}}};
  const auto rows = ratio_sweep(runs, kDefaultRatios, res, opts);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].ratio == "70/20/10");
  CHECK((*rows[1].values)[3] > (*rows[0].values)[3]);
  CHECK((*rows[1].values)[3] > (*rows[2].values)[3]);
}

TEST_CASE("missing sweep runs become NA rows") {
  const auto res = metrics::MeteorResources::defaults();
  const std::vector<SweepRun> runs = {{"toy", "70/20/10", {{"a", "small vessel change", "small vessel change"}}}};
  metrics::CorpusOptions opts;
  opts.n_resamples = 20;
  const auto rows = ratio_sweep(runs, kDefaultRatios, res, opts);
  REQUIRE(rows.size() == 3);
  CHECK(!rows[0].values);
  CHECK(rows[1].values);
  CHECK(!rows[2].values);
  const auto csv = sweep_csv(rows);
  CHECK(csv.find("toy,60/30/10,NA,NA,NA,NA,NA,NA,NA,NA\n") != std::string::npos);
  CHECK(sweep_json(rows)[0]["BLEU-1"].is_null());

  const std::vector<SweepRun> stray = {{"toy", "50/25/25", {}}};
  CHECK_THROWS_KIND(ratio_sweep(stray, kDefaultRatios, res, opts), ErrorKind::config);
}

TEST_CASE("pairing reports by id") {
  const std::map<std::string, std::string> cand = {{"b", "x"}, {"a", "y"}};
  const std::map<std::string, std::string> ref = {{"a", "ya"}, {"b", "xb"}, {"c", "zc"}};
  const auto pairs = pair_reports(cand, ref);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].patient_id == "a");
  CHECK(pairs[0].reference == "ya");
  const std::map<std::string, std::string> orphan = {{"d", "q"}};
  CHECK_THROWS_KIND(pair_reports(orphan, ref), ErrorKind::input);
}
