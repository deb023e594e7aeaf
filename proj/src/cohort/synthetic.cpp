// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "neurorep/cohort.hpp"
#include "neurorep/error.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::cohort {

namespace {

std::string synthetic_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "SYN%04zu", i + 1);
  return buf;
}

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
}

// lo, lo + 0.5, ..., hi
double uniform_half_step(Rng& rng, double lo, double hi) {
  const auto steps = static_cast<std::uint64_t>((hi - lo) * 2.0) + 1;
  return lo + 0.5 * static_cast<double>(rng.uniform_index(steps));
}

struct Stage {
  double cdr;
  double sumbox_lo, sumbox_hi;
  int mmse_lo, mmse_hi;
};

constexpr Stage kDementiaStages[] = {
    {0.5, 2.5, 4.0, 20, 26},
    {1.0, 4.5, 9.0, 16, 24},
    {2.0, 9.5, 15.5, 8, 18},
    {3.0, 16.0, 18.0, 0, 10},
};

PatientRecord draw_record(Rng& rng, std::size_t index) {
  PatientRecord r;
  r.patient_id = synthetic_id(index);
  r.age = uniform_int(rng, 50, 90);
  r.sex = rng.bernoulli(0.5) ? Sex::female : Sex::male;

  double vol_mean = 3600.0, vol_sd = 300.0;
  const double u = rng.uniform();
  if (u < 0.35) {
    r.diagnosis = "cognitively normal";
    r.cdr = 0.0;
    r.sumbox = rng.bernoulli(0.8) ? 0.0 : 0.5;
    r.mmse = uniform_int(rng, 26, 30);
  } else if (u < 0.60) {
    r.diagnosis = "mild cognitive impairment";
    r.cdr = 0.5;
    r.sumbox = uniform_half_step(rng, 0.5, 3.0);
    r.mmse = uniform_int(rng, 22, 28);
    vol_mean = 3300.0;
  } else {
    const bool ad = u < 0.90;
    r.diagnosis = ad ? "AD dementia" : "non-AD dementia";
    const double s = rng.uniform();
    const Stage& st = kDementiaStages[s < 0.15 ? 0 : s < 0.60 ? 1 : s < 0.85 ? 2 : 3];
    r.cdr = st.cdr;
    r.sumbox = uniform_half_step(rng, st.sumbox_lo, st.sumbox_hi);
    r.mmse = uniform_int(rng, st.mmse_lo, st.mmse_hi);
    vol_mean = ad ? 2800.0 : 3200.0;
    vol_sd = 350.0;
  }

  const double left = vol_mean + vol_sd * rng.normal();
  const double right = left * (1.0 + 0.03 * rng.normal()) + 40.0;
  r.hippocampus_left_mm3 = std::max(1000.0, std::round(left * 10.0) / 10.0);
  r.hippocampus_right_mm3 = std::max(1000.0, std::round(right * 10.0) / 10.0);

  r.mri_day = uniform_int(rng, 300, 1500);
  r.visit_day = r.mri_day + uniform_int(rng, -300, 300);
  return r;
}

PartialRecord clinical_row(const PatientRecord& r) {
  PartialRecord p;
  p.patient_id = r.patient_id;
  p.age = r.age;
  p.sex = r.sex;
  p.visit_day = r.visit_day;
  p.cdr = r.cdr;
  p.sumbox = r.sumbox;
  p.diagnosis = r.diagnosis;
  return p;
}

PartialRecord neuropsych_row(const PatientRecord& r) {
  PartialRecord p;
  p.patient_id = r.patient_id;
  p.visit_day = r.visit_day;
  p.mmse = r.mmse;
  return p;
}

PartialRecord volumetrics_row(const PatientRecord& r) {
  PartialRecord p;
  p.patient_id = r.patient_id;
  p.mri_day = r.mri_day;
  p.hippocampus_left_mm3 = r.hippocampus_left_mm3;
  p.hippocampus_right_mm3 = r.hippocampus_right_mm3;
  return p;
}

}  // namespace

std::vector<PatientRecord> generate_synthetic_cohort(std::size_t n, std::uint64_t seed) {
  if (n < 1) fail(ErrorKind::input, "synthetic cohort size must be at least 1");
  Rng rng(derive_seed(seed, {0x636f686f7274ULL}));
  std::vector<PatientRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw_record(rng, i));
  return out;
}

SyntheticSources generate_synthetic_sources(std::size_t n_total, std::size_t n_complete, std::uint64_t seed) {
  if (n_complete > n_total) fail(ErrorKind::bounds, "n_complete exceeds n_total");
  if (n_total < 1) fail(ErrorKind::input, "synthetic source size must be at least 1");
  const auto records = generate_synthetic_cohort(n_total, seed);

  // Seeded choice of which patients stay complete.
  Rng rng(derive_seed(seed, {0x736f7572636573ULL}));
  std::vector<std::size_t> order(n_total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n_total; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
  std::vector<bool> complete(n_total, false);
  for (std::size_t i = 0; i < n_complete; ++i) complete[order[i]] = true;

  SyntheticSources s;
  std::size_t broken = 0;
  for (std::size_t i = 0; i < n_total; ++i) {
    PatientRecord r = records[i];
    auto clin = clinical_row(r);
    auto neuro = neuropsych_row(r);
    auto vol = volumetrics_row(r);
    bool has_vol = true;

    if (complete[i]) {
      // A later clinical visit outside the window; the nearest-day rule must skip it.
      if (i % 5 == 0) {
        auto far = clin;
        far.visit_day = r.mri_day + 400 + static_cast<int>(i % 37);
        far.cdr = 3.0;
        far.sumbox = 18.0;
        s.clinical.push_back(far);
      }
    } else {
      switch (broken++ % 4) {
        case 0: has_vol = false; break;
        case 1: vol.hippocampus_left_mm3.reset(); break;
        case 2: {
          const int day = r.mri_day + 366 + static_cast<int>(i % 50);
          clin.visit_day = day;
          neuro.visit_day = day;
          break;
        }
        case 3: neuro.mmse.reset(); break;
      }
    }
    s.clinical.push_back(clin);
    s.neuropsych.push_back(neuro);
    if (has_vol) s.volumetrics.push_back(vol);
  }
  return s;
}

Schema clinical_schema() {
  return {{Field::patient_id, "subject_id"}, {Field::age, "age_at_visit"}, {Field::sex, "sex"},
          {Field::visit_day, "days_to_visit"}, {Field::cdr, "CDRGLOB"}, {Field::sumbox, "CDRSUM"},
          {Field::diagnosis, "final_dx"}};
}

Schema neuropsych_schema() {
  return {{Field::patient_id, "subject_id"}, {Field::visit_day, "days_to_visit"}, {Field::mmse, "MMSE"}};
}

Schema volumetrics_schema() {
  return {{Field::patient_id, "subject_id"}, {Field::mri_day, "days_to_mri"},
          {Field::hippocampus_left_mm3, "Left-Hippocampus"}, {Field::hippocampus_right_mm3, "Right-Hippocampus"}};
}

}  // namespace neurorep::cohort
