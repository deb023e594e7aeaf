// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <set>
#include <sstream>

#include "neurorep/cohort.hpp"
#include "test_support.hpp"

using namespace neurorep;
using namespace neurorep::cohort;

namespace {

PatientRecord sample_record(const std::string& id = "p1") {
  return PatientRecord{id, 72, Sex::female, 10, 27, 0.5, 1.5, "mild cognitive impairment", 3200.0, 3300.0, 30};
}

Schema id_mmse_schema() { return {{Field::patient_id, "id"}, {Field::mmse, "mmse"}}; }

PartialRecord clinical(const std::string& id, int day) {
  PartialRecord p;
  p.patient_id = id;
  p.visit_day = day;
  p.age = 70;
  p.sex = Sex::male;
  p.cdr = 0.0;
  p.sumbox = 0.0;
  p.diagnosis = "cognitively normal";
  return p;
}

PartialRecord neuro(const std::string& id, int day, int mmse = 29) {
  PartialRecord p;
  p.patient_id = id;
  p.visit_day = day;
  p.mmse = mmse;
  return p;
}

PartialRecord volumes(const std::string& id, int day) {
  PartialRecord p;
  p.patient_id = id;
  p.mri_day = day;
  p.hippocampus_left_mm3 = 3500.0;
  p.hippocampus_right_mm3 = 3550.0;
  return p;
}

}  // namespace

TEST_CASE("ingest parses cells and tolerates bad numerics") {
  const auto rows = ingest_table(std::string_view("id,mmse\np1,28\np2,\np3,abc\n"), id_mmse_schema());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].patient_id == "p1");
  CHECK(rows[0].mmse == 28);
  CHECK_FALSE(rows[1].mmse.has_value());
  CHECK_FALSE(rows[2].mmse.has_value());
}

TEST_CASE("ingest from a stream with quoted cells") {
  std::istringstream in("id,dx,mmse\n\"p,1\",\"AD dementia\",21\n");
  Schema s{{Field::patient_id, "id"}, {Field::diagnosis, "dx"}, {Field::mmse, "mmse"}};
  const auto rows = ingest_table(in, s);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].patient_id == "p,1");
  CHECK(rows[0].diagnosis == "AD dementia");
}

TEST_CASE("ingest missing column names it") {
  try {
    ingest_table(std::string_view("subject,mmse\np1,28\n"), id_mmse_schema());
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::schema);
    CHECK(std::string(e.what()).find("'id'") != std::string::npos);
  }
}

TEST_CASE("csv round trip through schema") {
  const auto src = generate_synthetic_sources(40, 30, 3);
  const auto text = to_csv(src.clinical, clinical_schema());
  CHECK(ingest_table(std::string_view(text), clinical_schema()) == src.clinical);
}

TEST_CASE("merge examples") {
  const std::vector<PartialRecord> clin{clinical("p1", 0), clinical("p2", 0), clinical("p3", 0), clinical("p3", 400)};
  const std::vector<PartialRecord> np{neuro("p1", 0), neuro("p2", 0), neuro("p3", 20)};
  const std::vector<PartialRecord> vol{volumes("p1", 5), volumes("p3", 30)};
  const auto m = merge_by_patient(clin, np, vol);
  CHECK(m.dropped_patients == 1);
  REQUIRE(m.candidates.size() == 2);
  CHECK(m.candidates[0].patient_id == "p1");
  CHECK(m.candidates[1].patient_id == "p3");
  // p3: clinical day 0 is nearer to the MRI at day 30 than day 400.
  CHECK(m.candidates[1].visit_day == 0);
  CHECK(m.candidates[1].mri_day == 30);
}

TEST_CASE("merge tie picks earlier visit") {
  auto early = clinical("p1", 20);
  early.cdr = 0.5;
  auto late = clinical("p1", 40);
  late.cdr = 1.0;
  const std::vector<PartialRecord> clin{late, early};
  const std::vector<PartialRecord> np{neuro("p1", 30)};
  const std::vector<PartialRecord> vol{volumes("p1", 30)};
  const auto m = merge_by_patient(clin, np, vol);
  REQUIRE(m.candidates.size() == 1);
  CHECK(m.candidates[0].cdr == 0.5);
  CHECK(m.candidates[0].visit_day == 20);
}

TEST_CASE("merge duplicate keys raise ambiguity listing offenders") {
  const std::vector<PartialRecord> clin{clinical("p1", 0), clinical("p1", 0)};
  const std::vector<PartialRecord> np{neuro("p1", 0)};
  const std::vector<PartialRecord> vol{volumes("p1", 0)};
  try {
    merge_by_patient(clin, np, vol);
    FAIL("expected ambiguity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ambiguity);
    CHECK(std::string(e.what()).find("p1@0") != std::string::npos);
  }
}

TEST_CASE("filter window boundary") {
  auto in = to_partial(sample_record("a"));
  in.visit_day = 0;
  in.mri_day = 365;
  auto out = to_partial(sample_record("b"));
  out.visit_day = 0;
  out.mri_day = 366;
  auto missing = to_partial(sample_record("c"));
  missing.hippocampus_left_mm3.reset();
  const std::vector<PartialRecord> cands{out, missing, in};
  const auto kept = filter_complete(cands);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].patient_id == "a");
}

TEST_CASE("filter output sorted by id and idempotent") {
  std::vector<PartialRecord> cands;
  for (const char* id : {"z", "m", "a", "q"}) cands.push_back(to_partial(sample_record(id)));
  const auto once = filter_complete(cands);
  REQUIRE(once.size() == 4);
  CHECK(once[0].patient_id == "a");
  CHECK(once[3].patient_id == "z");
  std::vector<PartialRecord> again;
  for (const auto& r : once) again.push_back(to_partial(r));
  CHECK(filter_complete(again) == once);
}

TEST_CASE("663 to 468 fixture") {
  const auto src = generate_synthetic_sources(663, 468, 11);
  const auto merged = merge_by_patient(src.clinical, src.neuropsych, src.volumetrics);
  CHECK(merged.candidates.size() + merged.dropped_patients == 663);
  CHECK(filter_complete(merged.candidates).size() == 468);

  // Same answer after a CSV round trip with renamed columns.
  const auto c = ingest_table(std::string_view(to_csv(src.clinical, clinical_schema())), clinical_schema());
  const auto n = ingest_table(std::string_view(to_csv(src.neuropsych, neuropsych_schema())), neuropsych_schema());
  const auto v = ingest_table(std::string_view(to_csv(src.volumetrics, volumetrics_schema())), volumetrics_schema());
  CHECK(filter_complete(merge_by_patient(c, n, v).candidates).size() == 468);
}

TEST_CASE("merge is idempotent") {
  const auto src = generate_synthetic_sources(120, 80, 5);
  const auto m = merge_by_patient(src.clinical, src.neuropsych, src.volumetrics).candidates;
  const auto again = merge_by_patient(m, m, m);
  CHECK(again.dropped_patients == 0);
  CHECK(again.candidates == m);
  const auto f = filter_complete(m);
  std::vector<PartialRecord> fp;
  for (const auto& r : f) fp.push_back(to_partial(r));
  CHECK(filter_complete(fp) == f);
}

TEST_CASE("band tables spot values") {
  CHECK(label(cdr_band(0.5)) == "very mild");
  CHECK(label(mmse_band(15)) == "moderate impairment");
  CHECK(label(mmse_band(24)) == "no significant impairment");
  CHECK(label(mmse_band(23)) == "mild impairment");
  CHECK(label(mmse_band(9)) == "severe impairment");
  CHECK(label(sumbox_band(0.0)) == "none");
  CHECK(label(sumbox_band(4.0)) == "very mild");
  CHECK(label(sumbox_band(4.5)) == "mild");
  CHECK(label(sumbox_band(15.5)) == "moderate");
  CHECK(label(sumbox_band(16.0)) == "severe");
  CHECK(label(volume_band(3.0)) == "severe atrophy");
  CHECK(label(volume_band(5.0)) == "moderate atrophy");
  CHECK(label(volume_band(25.0)) == "mild atrophy");
  CHECK(label(volume_band(50.0)) == "within normal limits");
}

TEST_CASE("band tables are total over legal values") {
  std::set<MmseBand> mmse_seen;
  for (int v = 0; v <= 30; ++v) mmse_seen.insert(mmse_band(v));
  CHECK(mmse_seen.size() == 4);
  std::set<SumboxBand> sb_seen;
  for (int k = 0; k <= 36; ++k) sb_seen.insert(sumbox_band(0.5 * k));
  CHECK(sb_seen.size() == 5);
  std::set<CdrBand> cdr_seen;
  for (double c : {0.0, 0.5, 1.0, 2.0, 3.0}) cdr_seen.insert(cdr_band(c));
  CHECK(cdr_seen.size() == 5);
  for (int k = 0; k <= 1000; ++k) CHECK_NOTHROW(volume_band(k * 0.1));
}

TEST_CASE("illegal values are rejected with the field name") {
  CHECK_THROWS_KIND(mmse_band(31), ErrorKind::validation);
  CHECK_THROWS_KIND(cdr_band(1.5), ErrorKind::validation);
  CHECK_THROWS_KIND(sumbox_band(2.25), ErrorKind::validation);
  CHECK_THROWS_KIND(sumbox_band(18.5), ErrorKind::validation);
  auto bad = sample_record();
  bad.cdr = 0.7;
  const VolumeReference ref({3000.0}, {3000.0});
  try {
    categorize(bad, ref);
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(std::string(e.what()).find("cdr:") != std::string::npos);
  }
  CHECK_THROWS_KIND(VolumeReference({}, {1.0}), ErrorKind::input);
}

TEST_CASE("percentile rank and hippocampal bands") {
  std::vector<double> ref;
  for (int i = 1; i <= 100; ++i) ref.push_back(1000.0 + 10.0 * i);
  // 3rd smallest value: 2 below + half of itself -> 2.5
  CHECK(percentile_rank(ref, 1030.0) == doctest::Approx(2.5));
  const VolumeReference vr(ref, ref);
  auto r = sample_record();
  r.hippocampus_left_mm3 = 1030.0;
  r.hippocampus_right_mm3 = 2000.0;
  const auto f = categorize(r, vr);
  CHECK(f.hippocampus_left_band == VolumeBand::severe_atrophy);
  CHECK(f.hippocampus_right_band == VolumeBand::within_normal_limits);
  CHECK(categorize(r, vr) == f);
  CHECK(f.diagnosis == r.diagnosis);
  CHECK(f.age == r.age);
}

TEST_CASE("synthetic cohort determinism and invariants") {
  CHECK(generate_synthetic_cohort(5, 7) == generate_synthetic_cohort(5, 7));
  CHECK_FALSE(generate_synthetic_cohort(5, 7) == generate_synthetic_cohort(5, 8));
  const auto c = generate_synthetic_cohort(468, 1);
  REQUIRE(c.size() == 468);
  for (const auto& r : c) {
    CHECK(r.mmse >= 0);
    CHECK(r.mmse <= 30);
    CHECK(validate_record(r).empty());
  }
  std::vector<PartialRecord> p;
  for (const auto& r : c) p.push_back(to_partial(r));
  CHECK(filter_complete(p).size() == 468);
}

TEST_CASE("synthetic diagnosis tracks severity") {
  const auto c = generate_synthetic_cohort(2000, 2);
  double ad_mmse = 0, cn_mmse = 0;
  int ad = 0, cn = 0;
  for (const auto& r : c) {
    if (r.diagnosis == "AD dementia") {
      ad_mmse += r.mmse;
      ++ad;
      CHECK(r.cdr >= 0.5);
    } else if (r.diagnosis == "cognitively normal") {
      cn_mmse += r.mmse;
      ++cn;
      CHECK(r.cdr == 0.0);
    }
  }
  REQUIRE(ad > 0);
  REQUIRE(cn > 0);
  CHECK(ad_mmse / ad < cn_mmse / cn - 5.0);
}

TEST_CASE("jsonl round trip") {
  const auto c = generate_synthetic_cohort(10, 4);
  const auto text = to_jsonl(c);
  std::vector<PatientRecord> back;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) back.push_back(record_from_json(nlohmann::json::parse(line)));
  CHECK(back == c);
  CHECK_THROWS_KIND(record_from_json(nlohmann::json::parse(R"({"patient_id":"x"})")), ErrorKind::format);
}

TEST_CASE("schema from json") {
  const auto s = schema_from_json(nlohmann::json::parse(R"({"patient_id":"ID","mmse":"MMSE"})"));
  CHECK(s.at(Field::mmse) == "MMSE");
  CHECK_THROWS_KIND(schema_from_json(nlohmann::json::parse(R"({"bogus":"x"})")), ErrorKind::schema);
}
