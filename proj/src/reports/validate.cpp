// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>

#include "json.hpp"
#include "neurorep/error.hpp"
#include "neurorep/io.hpp"
#include "neurorep/report_synth.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::reports {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view heading(Section s) {
  switch (s) {
    case Section::demographics: return "Demographics:";
    case Section::cognitive_assessment: return "Cognitive Assessment:";
    case Section::imaging_findings: return "Imaging Findings:";
    case Section::impression: return "Impression:";
  }
  return "";
}

int count_words(std::string_view text) {
  int n = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

SyntheticReport report_from_text(std::string patient_id, std::string text) {
  SyntheticReport r;
  r.patient_id = std::move(patient_id);
  r.word_count = count_words(text);
  std::vector<std::pair<std::size_t, Section>> found;
  for (Section s : kSections) {
    const auto at = text.find(heading(s));
    if (at != std::string::npos) found.emplace_back(at, s);
  }
  std::sort(found.begin(), found.end());
  for (const auto& [pos, s] : found) r.sections.push_back(s);
  r.text = std::move(text);
  return r;
}

std::vector<std::string> validate_report(const SyntheticReport& report) {
  std::vector<std::string> v;
  const int words = count_words(report.text);
  if (words < kMinWords || words > kMaxWords)
    v.push_back("word count " + std::to_string(words) + " outside [" + std::to_string(kMinWords) + ", " +
                std::to_string(kMaxWords) + "]");
  if (words != report.word_count)
    v.push_back("stored word_count " + std::to_string(report.word_count) + " disagrees with text (" +
                std::to_string(words) + ")");

  const auto derived = report_from_text(report.patient_id, report.text).sections;
  for (Section s : kSections)
    if (std::find(derived.begin(), derived.end(), s) == derived.end())
      v.push_back("missing section '" + std::string(heading(s)) + "'");
  if (derived.size() == std::size(kSections) && !std::equal(derived.begin(), derived.end(), std::begin(kSections)))
    v.emplace_back("sections out of order");

  for (const auto& l : report.labels)
    if (report.text.find(l) == std::string::npos) v.push_back("label '" + l + "' not found in text");
  return v;
}

std::vector<SyntheticReport> render_cohort(std::span<const cohort::PatientRecord> cohort, std::uint64_t seed) {
  const auto reference = cohort::VolumeReference::from_cohort(cohort);
  std::vector<SyntheticReport> out;
  out.reserve(cohort.size());
  for (const auto& r : cohort)
    out.push_back(render_report(cohort::categorize(r, reference), derive_seed(seed, {fnv1a(r.patient_id)})));
  return out;
}

std::string to_jsonl(std::span<const SyntheticReport> reports) {
  std::string out;
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["patient_id"] = r.patient_id;
    j["text"] = r.text;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<SyntheticReport> read_reports_jsonl(const std::filesystem::path& path) {
  std::vector<SyntheticReport> out;
  for (const auto& line : read_lines(path)) {
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back(report_from_text(j.at("patient_id").get<std::string>(), j.at("text").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::format, path.string() + ": " + e.what());
    }
  }
  return out;
}

void write_text_files(const std::filesystem::path& dir, std::span<const SyntheticReport> reports) {
  for (const auto& r : reports) write_text_file(dir / (r.patient_id + ".txt"), r.text + "\n");
}

}  // namespace neurorep::reports
