// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <initializer_list>

#include "neurorep/error.hpp"
#include "neurorep/report_synth.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::reports {

namespace {

// Every option within a slot has the same word count, so the seed never
// changes the length of a report.
class Builder {
 public:
  explicit Builder(std::uint64_t seed) : seed_(seed) {}

  void fixed(std::string_view s) { push(SegmentKind::fixed, std::string(s)); }
  void field(std::string s) { push(SegmentKind::field, std::move(s)); }
  void label(std::string_view s) { push(SegmentKind::label, std::string(s)); }
  void pick(std::initializer_list<std::string_view> options) {
    const int slot = next_slot_++;
    Rng rng(derive_seed(seed_, {0x73796eULL, static_cast<std::uint64_t>(slot)}));
    const auto choice = rng.uniform_index(options.size());
    Segment s{SegmentKind::synonym, std::string(options.begin()[choice]), slot};
    segments_.push_back(std::move(s));
  }

  std::vector<Segment> take() { return std::move(segments_); }

 private:
  void push(SegmentKind kind, std::string text) { segments_.push_back(Segment{kind, std::move(text), -1}); }

  std::uint64_t seed_;
  int next_slot_ = 0;
  std::vector<Segment> segments_;
};

int words_of(const std::vector<Segment>& segs) {
  std::string text;
  for (const auto& s : segs) text += s.text;
  return count_words(text);
}

}  // namespace

std::vector<Segment> render_segments(const cohort::CategorizedFeatures& f, std::uint64_t lexical_seed) {
  using cohort::label;
  Builder b(lexical_seed);

  b.fixed("Demographics: The patient is a ");
  b.field(std::to_string(f.age));
  b.fixed("-year-old ");
  b.field(f.sex == cohort::Sex::female ? "female" : "male");
  b.fixed(". ");
  b.pick({"This report summarizes", "This summary reviews", "This note describes"});
  b.fixed(" the ");
  b.pick({"data", "findings", "measures"});
  b.fixed(" ");
  b.pick({"gathered at the index visit", "collected at the index visit", "recorded at the index visit"});
  b.fixed(".\n\n");

  b.fixed("Cognitive Assessment: The Mini-Mental State Examination score ");
  b.pick({"indicates", "suggests", "reflects"});
  b.fixed(" ");
  b.label(label(f.mmse_band));
  b.fixed(". The Clinical Dementia Rating stage is ");
  b.label(label(f.cdr_band));
  b.fixed(", and the sum of boxes ");
  b.pick({"severity", "burden"});
  b.fixed(" is rated ");
  b.label(label(f.sumbox_band));
  b.fixed(". ");
  b.pick({"Functional abilities", "Daily functioning", "Everyday function"});
  b.fixed(" should be ");
  b.pick({"interpreted", "considered", "weighed"});
  b.fixed(" in light of these ");
  b.pick({"scores", "ratings", "results"});
  b.fixed(".\n\n");

  b.fixed("Imaging Findings: T1-weighted MRI ");
  b.pick({"was reviewed", "was assessed", "was examined"});
  b.fixed(". The left hippocampal volume is ");
  b.pick({"rated as", "graded as", "classified as"});
  b.fixed(" ");
  b.label(label(f.hippocampus_left_band));
  b.fixed(". The right hippocampal volume is ");
  b.pick({"rated as", "graded as", "classified as"});
  b.fixed(" ");
  b.label(label(f.hippocampus_right_band));
  b.fixed(". No ");
  b.pick({"additional", "further", "other"});
  b.fixed(" structural ");
  b.pick({"abnormality", "finding", "lesion"});
  b.fixed(" is reported.\n\n");

  b.fixed("Impression: Findings are ");
  b.pick({"consistent with", "compatible with", "suggestive of"});
  b.fixed(" ");
  b.label(f.diagnosis);
  b.fixed(". ");
  b.pick({"Follow-up assessment", "Longitudinal follow-up", "Continued monitoring"});
  b.fixed(" is ");
  b.pick({"advised", "recommended", "suggested"});
  b.fixed(" to track ");
  b.pick({"cognitive", "clinical"});
  b.fixed(" change.");

  auto segs = b.take();
  if (words_of(segs) < kMinWords) {
    Segment last{SegmentKind::filler, " " + std::string(kFillerSentence), -1};
    segs.push_back(std::move(last));
  }
  return segs;
}

SyntheticReport render_report(const cohort::CategorizedFeatures& f, std::uint64_t lexical_seed) {
  const auto segs = render_segments(f, lexical_seed);
  std::string text;
  for (const auto& s : segs) text += s.text;
  auto report = report_from_text(f.patient_id, std::move(text));
  if (report.word_count < kMinWords || report.word_count > kMaxWords)
    fail(ErrorKind::render, "report for " + f.patient_id + " has " + std::to_string(report.word_count) +
                                " words, outside [" + std::to_string(kMinWords) + ", " + std::to_string(kMaxWords) +
                                "]");
  for (std::string_view l : {cohort::label(f.mmse_band), cohort::label(f.cdr_band), cohort::label(f.sumbox_band),
                             cohort::label(f.hippocampus_left_band), cohort::label(f.hippocampus_right_band)})
    report.labels.emplace_back(l);
  report.labels.push_back(f.diagnosis);
  return report;
}

}  // namespace neurorep::reports
