// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "neurorep/cohort.hpp"
#include "neurorep/error.hpp"
#include "neurorep/io.hpp"

namespace neurorep::cohort {

std::string_view to_string(Sex sex) { return sex == Sex::male ? "M" : "F"; }

std::string_view field_name(Field f) {
  switch (f) {
    case Field::patient_id: return "patient_id";
    case Field::age: return "age";
    case Field::sex: return "sex";
    case Field::visit_day: return "visit_day";
    case Field::mmse: return "mmse";
    case Field::cdr: return "cdr";
    case Field::sumbox: return "sumbox";
    case Field::diagnosis: return "diagnosis";
    case Field::hippocampus_left_mm3: return "hippocampus_left_mm3";
    case Field::hippocampus_right_mm3: return "hippocampus_right_mm3";
    case Field::mri_day: return "mri_day";
  }
  return "";
}

std::optional<Field> field_from_name(std::string_view name) {
  for (Field f : kAllFields)
    if (field_name(f) == name) return f;
  return std::nullopt;
}

Schema identity_schema(std::span<const Field> fields) {
  Schema s;
  for (Field f : fields) s[f] = std::string(field_name(f));
  return s;
}

Schema schema_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::schema, "schema must be a JSON object of field -> column");
  Schema s;
  for (const auto& [key, value] : j.items()) {
    const auto f = field_from_name(key);
    if (!f) fail(ErrorKind::schema, "unknown field '" + key + "'");
    if (!value.is_string()) fail(ErrorKind::schema, "column for '" + key + "' must be a string");
    s[*f] = value.get<std::string>();
  }
  return s;
}

std::vector<std::string> validate_record(const PatientRecord& r) {
  std::vector<std::string> v;
  if (r.patient_id.empty()) v.emplace_back("patient_id: empty");
  if (r.age < 0 || r.age > 130) v.emplace_back("age: " + std::to_string(r.age) + " outside [0, 130]");
  if (r.mmse < 0 || r.mmse > 30) v.emplace_back("mmse: " + std::to_string(r.mmse) + " outside [0, 30]");
  if (!(r.cdr == 0.0 || r.cdr == 0.5 || r.cdr == 1.0 || r.cdr == 2.0 || r.cdr == 3.0))
    v.emplace_back("cdr: " + format_double(r.cdr) + " not in {0, 0.5, 1, 2, 3}");
  if (!(r.sumbox >= 0.0 && r.sumbox <= 18.0) || std::floor(r.sumbox * 2.0) != r.sumbox * 2.0)
    v.emplace_back("sumbox: " + format_double(r.sumbox) + " not in [0, 18] in steps of 0.5");
  if (r.diagnosis.empty()) v.emplace_back("diagnosis: empty");
  if (!(r.hippocampus_left_mm3 > 0.0) || !std::isfinite(r.hippocampus_left_mm3))
    v.emplace_back("hippocampus_left_mm3: must be positive");
  if (!(r.hippocampus_right_mm3 > 0.0) || !std::isfinite(r.hippocampus_right_mm3))
    v.emplace_back("hippocampus_right_mm3: must be positive");
  return v;
}

PartialRecord to_partial(const PatientRecord& r) {
  return PartialRecord{r.patient_id, r.age, r.sex, r.visit_day, r.mmse, r.cdr, r.sumbox, r.diagnosis,
                       r.hippocampus_left_mm3, r.hippocampus_right_mm3, r.mri_day};
}

nlohmann::ordered_json to_json(const PatientRecord& r) {
  nlohmann::ordered_json j;
  j["patient_id"] = r.patient_id;
  j["age"] = r.age;
  j["sex"] = to_string(r.sex);
  j["visit_day"] = r.visit_day;
  j["mmse"] = r.mmse;
  j["cdr"] = r.cdr;
  j["sumbox"] = r.sumbox;
  j["diagnosis"] = r.diagnosis;
  j["hippocampus_left_mm3"] = r.hippocampus_left_mm3;
  j["hippocampus_right_mm3"] = r.hippocampus_right_mm3;
  j["mri_day"] = r.mri_day;
  return j;
}

PatientRecord record_from_json(const nlohmann::json& j) {
  try {
    PatientRecord r;
    r.patient_id = j.at("patient_id").get<std::string>();
    r.age = j.at("age").get<int>();
    const auto sex = j.at("sex").get<std::string>();
    if (sex != "M" && sex != "F") fail(ErrorKind::format, "sex must be M or F");
    r.sex = sex == "M" ? Sex::male : Sex::female;
    r.visit_day = j.at("visit_day").get<int>();
    r.mmse = j.at("mmse").get<int>();
    r.cdr = j.at("cdr").get<double>();
    r.sumbox = j.at("sumbox").get<double>();
    r.diagnosis = j.at("diagnosis").get<std::string>();
    r.hippocampus_left_mm3 = j.at("hippocampus_left_mm3").get<double>();
    r.hippocampus_right_mm3 = j.at("hippocampus_right_mm3").get<double>();
    r.mri_day = j.at("mri_day").get<int>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::format, std::string("bad cohort record: ") + e.what());
  }
}

std::string to_jsonl(std::span<const PatientRecord> records) {
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

std::vector<PatientRecord> read_cohort_jsonl(const std::filesystem::path& path) {
  std::vector<PatientRecord> out;
  for (const auto& line : read_lines(path)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::format, path.string() + ": " + e.what());
    }
    out.push_back(record_from_json(j));
  }
  return out;
}

}  // namespace neurorep::cohort
