// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

#include "neurorep/cohort.hpp"
#include "neurorep/error.hpp"

namespace neurorep::cohort {

namespace {

enum class Source { clinical, neuropsych, volumetrics };

const char* source_name(Source s) {
  switch (s) {
    case Source::clinical: return "clinical";
    case Source::neuropsych: return "neuropsych";
    case Source::volumetrics: return "volumetrics";
  }
  return "";
}

int key_day(const PartialRecord& r, Source s) {
  if (s == Source::volumetrics && r.mri_day) return *r.mri_day;
  return r.visit_day.value_or(0);
}

// patient_id -> rows ordered by day
using Grouped = std::map<std::string, std::map<int, const PartialRecord*>>;

Grouped group(std::span<const PartialRecord> rows, Source s, std::vector<std::string>& offenders) {
  Grouped g;
  for (const auto& r : rows) {
    const int day = key_day(r, s);
    auto [it, inserted] = g[r.patient_id].emplace(day, &r);
    if (!inserted) offenders.push_back(std::string(source_name(s)) + ":" + r.patient_id + "@" + std::to_string(day));
  }
  return g;
}

// Nearest row to `day`; on equal distance the earlier visit wins because the
// map is scanned in ascending order and only a strictly closer row replaces.
std::pair<int, const PartialRecord*> nearest(const std::map<int, const PartialRecord*>& rows, int day) {
  std::pair<int, const PartialRecord*> best{0, nullptr};
  long best_dist = -1;
  for (const auto& [d, r] : rows) {
    const long dist = std::labs(static_cast<long>(d) - day);
    if (best_dist < 0 || dist < best_dist) {
      best = {d, r};
      best_dist = dist;
    }
  }
  return best;
}

template <class T>
void fill(std::optional<T>& dst, std::initializer_list<const std::optional<T>*> sources) {
  for (const auto* s : sources) {
    if (*s) {
      dst = **s;
      return;
    }
  }
}

}  // namespace

MergeResult merge_by_patient(std::span<const PartialRecord> clinical, std::span<const PartialRecord> neuropsych,
                             std::span<const PartialRecord> volumetrics) {
  std::vector<std::string> offenders;
  const auto clin = group(clinical, Source::clinical, offenders);
  const auto neuro = group(neuropsych, Source::neuropsych, offenders);
  const auto vol = group(volumetrics, Source::volumetrics, offenders);
  if (!offenders.empty()) {
    std::string msg = "duplicate (patient_id, day) keys:";
    for (const auto& o : offenders) msg += " " + o;
    fail(ErrorKind::ambiguity, msg);
  }

  std::set<std::string> all_ids;
  for (const Grouped* g : {&clin, &neuro, &vol})
    for (const auto& [id, rows] : *g) all_ids.insert(id);

  MergeResult out;
  for (const auto& id : all_ids) {
    const auto c = clin.find(id);
    const auto n = neuro.find(id);
    const auto v = vol.find(id);
    if (c == clin.end() || n == neuro.end() || v == vol.end()) {
      ++out.dropped_patients;
      continue;
    }
    const auto& [mri_day, vrow] = *v->second.begin();
    const auto [cday, crow] = nearest(c->second, mri_day);
    const auto [nday, nrow] = nearest(n->second, mri_day);

    PartialRecord m;
    m.patient_id = id;
    fill(m.age, {&crow->age, &nrow->age, &vrow->age});
    fill(m.sex, {&crow->sex, &nrow->sex, &vrow->sex});
    fill(m.cdr, {&crow->cdr, &nrow->cdr, &vrow->cdr});
    fill(m.sumbox, {&crow->sumbox, &nrow->sumbox, &vrow->sumbox});
    fill(m.diagnosis, {&crow->diagnosis, &nrow->diagnosis, &vrow->diagnosis});
    fill(m.mmse, {&nrow->mmse, &crow->mmse, &vrow->mmse});
    fill(m.hippocampus_left_mm3, {&vrow->hippocampus_left_mm3, &crow->hippocampus_left_mm3, &nrow->hippocampus_left_mm3});
    fill(m.hippocampus_right_mm3,
         {&vrow->hippocampus_right_mm3, &crow->hippocampus_right_mm3, &nrow->hippocampus_right_mm3});
    m.mri_day = mri_day;
    m.visit_day = std::labs(static_cast<long>(nday) - mri_day) > std::labs(static_cast<long>(cday) - mri_day) ? nday : cday;
    out.candidates.push_back(std::move(m));
  }
  return out;
}

std::vector<PatientRecord> filter_complete(std::span<const PartialRecord> candidates, int window_days) {
  std::vector<PatientRecord> out;
  for (const auto& c : candidates) {
    if (c.patient_id.empty() || !c.age || !c.sex || !c.visit_day || !c.mmse || !c.cdr || !c.sumbox ||
        !c.diagnosis || !c.hippocampus_left_mm3 || !c.hippocampus_right_mm3 || !c.mri_day)
      continue;
    PatientRecord r{c.patient_id, *c.age,      *c.sex,      *c.visit_day,           *c.mmse,
                    *c.cdr,       *c.sumbox,   *c.diagnosis, *c.hippocampus_left_mm3, *c.hippocampus_right_mm3,
                    *c.mri_day};
    if (!validate_record(r).empty()) continue;
    if (std::labs(static_cast<long>(r.visit_day) - r.mri_day) > window_days) continue;
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const PatientRecord& a, const PatientRecord& b) {
    return a.patient_id < b.patient_id;
  });
  return out;
}

}  // namespace neurorep::cohort
