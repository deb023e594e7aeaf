// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace neurorep::cohort {

enum class Sex { male, female };

std::string_view to_string(Sex sex);  // "M" / "F"

// One merged visit: clinical, neuropsychometric and volumetric values for a
// patient. Instances produced by filter_complete() satisfy every range
// invariant (see validate_record).
struct PatientRecord {
  std::string patient_id;
  int age = 0;
  Sex sex = Sex::female;
  int visit_day = 0;  // days from baseline
  int mmse = 0;       // 0..30
  double cdr = 0.0;   // {0, 0.5, 1, 2, 3}
  double sumbox = 0.0;  // 0..18 in steps of 0.5
  std::string diagnosis;
  double hippocampus_left_mm3 = 0.0;
  double hippocampus_right_mm3 = 0.0;
  int mri_day = 0;

  bool operator==(const PatientRecord&) const = default;
};

// A row from one source table; any field except the id may be missing.
struct PartialRecord {
  std::string patient_id;
  std::optional<int> age;
  std::optional<Sex> sex;
  std::optional<int> visit_day;
  std::optional<int> mmse;
  std::optional<double> cdr;
  std::optional<double> sumbox;
  std::optional<std::string> diagnosis;
  std::optional<double> hippocampus_left_mm3;
  std::optional<double> hippocampus_right_mm3;
  std::optional<int> mri_day;

  bool operator==(const PartialRecord&) const = default;
};

enum class Field {
  patient_id,
  age,
  sex,
  visit_day,
  mmse,
  cdr,
  sumbox,
  diagnosis,
  hippocampus_left_mm3,
  hippocampus_right_mm3,
  mri_day,
};

inline constexpr Field kAllFields[] = {Field::patient_id, Field::age,     Field::sex,
                                       Field::visit_day,  Field::mmse,    Field::cdr,
                                       Field::sumbox,     Field::diagnosis, Field::hippocampus_left_mm3,
                                       Field::hippocampus_right_mm3, Field::mri_day};

std::string_view field_name(Field f);
std::optional<Field> field_from_name(std::string_view name);

// Field -> column header. Every mapped column must exist in the table and
// patient_id must be mapped.
using Schema = std::map<Field, std::string>;

// Maps the given fields to columns named after the fields themselves.
Schema identity_schema(std::span<const Field> fields);
Schema schema_from_json(const nlohmann::json& j);  // {"mmse": "MMSE", ...}

// One PartialRecord per data row. Numeric cells that do not parse become
// missing values; rows with an empty id are skipped.
std::vector<PartialRecord> ingest_table(std::istream& rows, const Schema& schema);
std::vector<PartialRecord> ingest_table(std::string_view text, const Schema& schema);

// Writes partial records as CSV with the given schema's columns.
std::string to_csv(std::span<const PartialRecord> rows, const Schema& schema);

struct MergeResult {
  std::vector<PartialRecord> candidates;  // sorted by patient_id
  std::size_t dropped_patients = 0;       // ids missing from at least one source
};

// Inner join on patient_id. Each source row is keyed by its day: visit_day
// for clinical and neuropsych rows, mri_day (else visit_day) for volumetric
// rows; a row without a day is keyed as day 0. Per patient the earliest MRI
// session anchors the merge and the clinical and neuropsych rows nearest to
// it are chosen (ties go to the earlier visit). The merged visit_day is the
// chosen assessment day farther from the MRI, so the window filter bounds
// both assessments. Throws ambiguity error on duplicate (id, day) keys.
MergeResult merge_by_patient(std::span<const PartialRecord> clinical, std::span<const PartialRecord> neuropsych,
                             std::span<const PartialRecord> volumetrics);

// Keeps records with every field present, all range invariants satisfied,
// and |visit_day - mri_day| <= window_days. Sorted by patient_id.
std::vector<PatientRecord> filter_complete(std::span<const PartialRecord> candidates, int window_days = 365);

PartialRecord to_partial(const PatientRecord& r);

// Range violations, one message per offending field (empty when valid).
std::vector<std::string> validate_record(const PatientRecord& r);

// --- qualitative bands ---------------------------------------------------

enum class MmseBand { no_significant_impairment, mild, moderate, severe };
enum class CdrBand { normal, very_mild, mild, moderate, severe };
enum class SumboxBand { none, very_mild, mild, moderate, severe };
enum class VolumeBand { severe_atrophy, moderate_atrophy, mild_atrophy, within_normal_limits };

std::string_view label(MmseBand b);
std::string_view label(CdrBand b);
std::string_view label(SumboxBand b);
std::string_view label(VolumeBand b);

MmseBand mmse_band(int mmse);
CdrBand cdr_band(double cdr);
SumboxBand sumbox_band(double sumbox);
VolumeBand volume_band(double percentile_rank);

// Cohort distribution of hippocampal volumes, kept sorted.
class VolumeReference {
 public:
  VolumeReference(std::vector<double> left, std::vector<double> right);
  static VolumeReference from_cohort(std::span<const PatientRecord> cohort);

  // Percent of reference values below v, counting ties as half: in [0, 100].
  double left_rank(double v) const;
  double right_rank(double v) const;

 private:
  std::vector<double> left_;
  std::vector<double> right_;
};

double percentile_rank(std::span<const double> sorted, double v);

struct CategorizedFeatures {
  std::string patient_id;
  MmseBand mmse_band = MmseBand::no_significant_impairment;
  CdrBand cdr_band = CdrBand::normal;
  SumboxBand sumbox_band = SumboxBand::none;
  VolumeBand hippocampus_left_band = VolumeBand::within_normal_limits;
  VolumeBand hippocampus_right_band = VolumeBand::within_normal_limits;
  std::string diagnosis;
  int age = 0;
  Sex sex = Sex::female;

  bool operator==(const CategorizedFeatures&) const = default;
};

// Throws validation error naming the first offending field.
CategorizedFeatures categorize(const PatientRecord& record, const VolumeReference& reference);

// --- synthetic data ------------------------------------------------------

// Complete, in-window records whose diagnosis agrees with MMSE/CDR/sumbox.
std::vector<PatientRecord> generate_synthetic_cohort(std::size_t n, std::uint64_t seed);

struct SyntheticSources {
  std::vector<PartialRecord> clinical;     // age, sex, visit_day, cdr, sumbox, diagnosis
  std::vector<PartialRecord> neuropsych;   // visit_day, mmse
  std::vector<PartialRecord> volumetrics;  // mri_day, hippocampal volumes
};

// Three raw source tables for n_total patients of which exactly n_complete
// survive merge + filter_complete; the rest miss a source, miss a field or
// fall outside the one-year window.
SyntheticSources generate_synthetic_sources(std::size_t n_total, std::size_t n_complete, std::uint64_t seed);

Schema clinical_schema();
Schema neuropsych_schema();
Schema volumetrics_schema();

// --- persistence ---------------------------------------------------------

nlohmann::ordered_json to_json(const PatientRecord& r);
PatientRecord record_from_json(const nlohmann::json& j);

std::string to_jsonl(std::span<const PatientRecord> records);
std::vector<PatientRecord> read_cohort_jsonl(const std::filesystem::path& path);

}  // namespace neurorep::cohort
