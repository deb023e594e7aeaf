// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "neurorep/cohort.hpp"
#include "neurorep/error.hpp"
#include "neurorep/io.hpp"

namespace neurorep::cohort {

std::string_view label(MmseBand b) {
  switch (b) {
    case MmseBand::no_significant_impairment: return "no significant impairment";
    case MmseBand::mild: return "mild impairment";
    case MmseBand::moderate: return "moderate impairment";
    case MmseBand::severe: return "severe impairment";
  }
  return "";
}

std::string_view label(CdrBand b) {
  switch (b) {
    case CdrBand::normal: return "normal";
    case CdrBand::very_mild: return "very mild";
    case CdrBand::mild: return "mild";
    case CdrBand::moderate: return "moderate";
    case CdrBand::severe: return "severe";
  }
  return "";
}

std::string_view label(SumboxBand b) {
  switch (b) {
    case SumboxBand::none: return "none";
    case SumboxBand::very_mild: return "very mild";
    case SumboxBand::mild: return "mild";
    case SumboxBand::moderate: return "moderate";
    case SumboxBand::severe: return "severe";
  }
  return "";
}

std::string_view label(VolumeBand b) {
  switch (b) {
    case VolumeBand::severe_atrophy: return "severe atrophy";
    case VolumeBand::moderate_atrophy: return "moderate atrophy";
    case VolumeBand::mild_atrophy: return "mild atrophy";
    case VolumeBand::within_normal_limits: return "within normal limits";
  }
  return "";
}

MmseBand mmse_band(int mmse) {
  if (mmse < 0 || mmse > 30) fail(ErrorKind::validation, "mmse: " + std::to_string(mmse) + " outside [0, 30]");
  if (mmse >= 24) return MmseBand::no_significant_impairment;
  if (mmse >= 19) return MmseBand::mild;
  if (mmse >= 10) return MmseBand::moderate;
  return MmseBand::severe;
}

CdrBand cdr_band(double cdr) {
  if (cdr == 0.0) return CdrBand::normal;
  if (cdr == 0.5) return CdrBand::very_mild;
  if (cdr == 1.0) return CdrBand::mild;
  if (cdr == 2.0) return CdrBand::moderate;
  if (cdr == 3.0) return CdrBand::severe;
  fail(ErrorKind::validation, "cdr: " + format_double(cdr) + " not in {0, 0.5, 1, 2, 3}");
}

SumboxBand sumbox_band(double sumbox) {
  if (!(sumbox >= 0.0 && sumbox <= 18.0) || std::floor(sumbox * 2.0) != sumbox * 2.0)
    fail(ErrorKind::validation, "sumbox: " + format_double(sumbox) + " not in [0, 18] in steps of 0.5");
  if (sumbox == 0.0) return SumboxBand::none;
  if (sumbox <= 4.0) return SumboxBand::very_mild;
  if (sumbox <= 9.0) return SumboxBand::mild;
  if (sumbox <= 15.5) return SumboxBand::moderate;
  return SumboxBand::severe;
}

VolumeBand volume_band(double rank) {
  if (!(rank >= 0.0 && rank <= 100.0))
    fail(ErrorKind::validation, "percentile rank " + format_double(rank) + " outside [0, 100]");
  if (rank < 5.0) return VolumeBand::severe_atrophy;
  if (rank < 25.0) return VolumeBand::moderate_atrophy;
  if (rank < 50.0) return VolumeBand::mild_atrophy;
  return VolumeBand::within_normal_limits;
}

double percentile_rank(std::span<const double> sorted, double v) {
  if (sorted.empty()) fail(ErrorKind::input, "empty volume reference");
  const auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
  const auto hi = std::upper_bound(lo, sorted.end(), v);
  const double below = static_cast<double>(lo - sorted.begin());
  const double equal = static_cast<double>(hi - lo);
  return 100.0 * (below + 0.5 * equal) / static_cast<double>(sorted.size());
}

VolumeReference::VolumeReference(std::vector<double> left, std::vector<double> right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (left_.empty() || right_.empty()) fail(ErrorKind::input, "volume reference needs at least one value per side");
  for (const auto* side : {&left_, &right_})
    for (double v : *side)
      if (!std::isfinite(v)) fail(ErrorKind::numeric, "non-finite reference volume");
  std::sort(left_.begin(), left_.end());
  std::sort(right_.begin(), right_.end());
}

VolumeReference VolumeReference::from_cohort(std::span<const PatientRecord> cohort) {
  std::vector<double> left, right;
  for (const auto& r : cohort) {
    left.push_back(r.hippocampus_left_mm3);
    right.push_back(r.hippocampus_right_mm3);
  }
  return VolumeReference(std::move(left), std::move(right));
}

double VolumeReference::left_rank(double v) const { return percentile_rank(left_, v); }
double VolumeReference::right_rank(double v) const { return percentile_rank(right_, v); }

CategorizedFeatures categorize(const PatientRecord& record, const VolumeReference& reference) {
  const auto problems = validate_record(record);
  if (!problems.empty()) fail(ErrorKind::validation, problems.front());
  CategorizedFeatures f;
  f.patient_id = record.patient_id;
  f.mmse_band = mmse_band(record.mmse);
  f.cdr_band = cdr_band(record.cdr);
  f.sumbox_band = sumbox_band(record.sumbox);
  f.hippocampus_left_band = volume_band(reference.left_rank(record.hippocampus_left_mm3));
  f.hippocampus_right_band = volume_band(reference.right_rank(record.hippocampus_right_mm3));
  f.diagnosis = record.diagnosis;
  f.age = record.age;
  f.sex = record.sex;
  return f;
}

}  // namespace neurorep::cohort
