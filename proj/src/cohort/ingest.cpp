// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "neurorep/cohort.hpp"
#include "neurorep/csv.hpp"
#include "neurorep/error.hpp"
#include "neurorep/io.hpp"

namespace neurorep::cohort {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> parse_int(std::string_view cell) {
  const auto v = parse_real(cell);
  if (!v || std::floor(*v) != *v || std::abs(*v) > 1e9) return std::nullopt;
  return static_cast<int>(*v);
}

std::optional<Sex> parse_sex(std::string_view cell) {
  std::string s(trim(cell));
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "m" || s == "male") return Sex::male;
  if (s == "f" || s == "female") return Sex::female;
  return std::nullopt;
}

void assign(PartialRecord& r, Field f, std::string_view cell) {
  switch (f) {
    case Field::patient_id: r.patient_id = std::string(trim(cell)); break;
    case Field::age: r.age = parse_int(cell); break;
    case Field::sex: r.sex = parse_sex(cell); break;
    case Field::visit_day: r.visit_day = parse_int(cell); break;
    case Field::mmse: r.mmse = parse_int(cell); break;
    case Field::cdr: r.cdr = parse_real(cell); break;
    case Field::sumbox: r.sumbox = parse_real(cell); break;
    case Field::diagnosis: {
      const auto t = trim(cell);
      if (!t.empty()) r.diagnosis = std::string(t);
      break;
    }
    case Field::hippocampus_left_mm3: r.hippocampus_left_mm3 = parse_real(cell); break;
    case Field::hippocampus_right_mm3: r.hippocampus_right_mm3 = parse_real(cell); break;
    case Field::mri_day: r.mri_day = parse_int(cell); break;
  }
}

template <class T>
std::string cell_text(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, double>) {
    return format_double(*v);
  } else if constexpr (std::is_same_v<T, Sex>) {
    return std::string(to_string(*v));
  } else if constexpr (std::is_same_v<T, std::string>) {
    return *v;
  } else {
    return std::to_string(*v);
  }
}

std::string cell_of(const PartialRecord& r, Field f) {
  switch (f) {
    case Field::patient_id: return r.patient_id;
    case Field::age: return cell_text(r.age);
    case Field::sex: return cell_text(r.sex);
    case Field::visit_day: return cell_text(r.visit_day);
    case Field::mmse: return cell_text(r.mmse);
    case Field::cdr: return cell_text(r.cdr);
    case Field::sumbox: return cell_text(r.sumbox);
    case Field::diagnosis: return cell_text(r.diagnosis);
    case Field::hippocampus_left_mm3: return cell_text(r.hippocampus_left_mm3);
    case Field::hippocampus_right_mm3: return cell_text(r.hippocampus_right_mm3);
    case Field::mri_day: return cell_text(r.mri_day);
  }
  return "";
}

}  // namespace

std::vector<PartialRecord> ingest_table(std::string_view text, const Schema& schema) {
  if (!schema.count(Field::patient_id)) fail(ErrorKind::schema, "schema does not map patient_id");
  const auto rows = csv::parse(text);
  if (rows.empty()) fail(ErrorKind::schema, "table has no header row");
  const auto& header = rows.front();

  std::vector<std::pair<Field, std::size_t>> columns;
  for (const auto& [field, column] : schema) {
    const auto it = std::find_if(header.begin(), header.end(),
                                 [&](const std::string& h) { return trim(h) == column; });
    if (it == header.end()) fail(ErrorKind::schema, "missing required column '" + column + "'");
    columns.emplace_back(field, static_cast<std::size_t>(it - header.begin()));
  }

  std::vector<PartialRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    PartialRecord r;
    for (const auto& [field, col] : columns) assign(r, field, col < rows[i].size() ? rows[i][col] : "");
    if (!r.patient_id.empty()) out.push_back(std::move(r));
  }
  return out;
}

std::vector<PartialRecord> ingest_table(std::istream& rows, const Schema& schema) {
  std::ostringstream buf;
  buf << rows.rdbuf();
  return ingest_table(buf.str(), schema);
}

std::string to_csv(std::span<const PartialRecord> rows, const Schema& schema) {
  csv::Row header;
  for (const auto& [field, column] : schema) header.push_back(column);
  std::string out = csv::join(header) + "\n";
  for (const auto& r : rows) {
    csv::Row row;
    for (const auto& [field, column] : schema) row.push_back(cell_of(r, field));
    out += csv::join(row) + "\n";
  }
  return out;
}

}  // namespace neurorep::cohort
