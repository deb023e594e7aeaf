// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neurorep/cohort.hpp"

namespace neurorep::reports {

enum class Section { demographics, cognitive_assessment, imaging_findings, impression };

inline constexpr Section kSections[] = {Section::demographics, Section::cognitive_assessment,
                                        Section::imaging_findings, Section::impression};

// "Demographics:", "Cognitive Assessment:", ...
std::string_view heading(Section s);

struct SyntheticReport {
  std::string patient_id;
  std::string text;
  int word_count = 0;
  std::vector<Section> sections;
  // Labels the text must contain verbatim. Empty for reports read back from
  // disk, in which case validate_report skips the label check.
  std::vector<std::string> labels;

  bool operator==(const SyntheticReport&) const = default;
};

// Whitespace-delimited word count.
int count_words(std::string_view text);

enum class SegmentKind {
  fixed,    // template text
  field,    // age / sex
  label,    // band label or diagnosis
  synonym,  // seeded choice among equal-length phrasings
  filler,   // neutral sentence added to reach the minimum length
};

struct Segment {
  SegmentKind kind = SegmentKind::fixed;
  std::string text;
  int slot = -1;  // synonym slot id, -1 otherwise

  bool operator==(const Segment&) const = default;
};

inline constexpr int kMinWords = 100;
inline constexpr int kMaxWords = 150;
inline constexpr std::string_view kFillerSentence = "Clinical correlation is recommended.";

// The rendered report as a sequence of typed pieces; concatenating the
// texts gives SyntheticReport::text.
std::vector<Segment> render_segments(const cohort::CategorizedFeatures& features, std::uint64_t lexical_seed);

// Throws render error when the word count cannot be brought into
// [kMinWords, kMaxWords].
SyntheticReport render_report(const cohort::CategorizedFeatures& features, std::uint64_t lexical_seed);

// One message per violated invariant; empty when valid.
std::vector<std::string> validate_report(const SyntheticReport& report);

// Rebuilds word_count and sections from the text.
SyntheticReport report_from_text(std::string patient_id, std::string text);

// Categorizes every record against the cohort's own volume distribution and
// renders it. Each patient's lexical seed is derived from `seed` and its id.
std::vector<SyntheticReport> render_cohort(std::span<const cohort::PatientRecord> cohort, std::uint64_t seed);

std::string to_jsonl(std::span<const SyntheticReport> reports);  // {"patient_id", "text"} per line
std::vector<SyntheticReport> read_reports_jsonl(const std::filesystem::path& path);
void write_text_files(const std::filesystem::path& dir, std::span<const SyntheticReport> reports);

}  // namespace neurorep::reports
