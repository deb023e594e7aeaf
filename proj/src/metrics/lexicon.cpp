// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/metrics/lexicon.hpp"

#include <algorithm>
#include <sstream>

#include "neurorep/io.hpp"
#include "neurorep/metrics/tokenize.hpp"

namespace neurorep::metrics {

namespace {

// Band labels (mild, moderate, severe, normal...) are deliberately absent:
// swapping them would change the clinical content of a report.
constexpr std::string_view kBuiltinLexicon = R"(# clinical mini-lexicon
patient individual subject
shows demonstrates exhibits reveals
indicates suggests denotes
assessment evaluation examination
findings observations results
consistent compatible congruent
impairment deficit dysfunction
reduced decreased diminished
volume size
atrophy shrinkage
recommended advised
clinical medical
cognitive mental
examination exam
overall general
performance functioning
presentation picture
structural anatomical
imaging scan
regions areas
profile pattern
notable marked appreciable
documented recorded noted
measured quantified
stage grade
rating score
correlation comparison
)";

}  // namespace

SynonymLexicon SynonymLexicon::parse(std::string_view text) {
  SynonymLexicon lex;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::string> words = tokenize(line).tokens();
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    if (words.size() < 2) continue;
    const std::size_t idx = lex.sets_.size();
    for (const auto& w : words) lex.membership_[w].insert(idx);
    lex.sets_.push_back(std::move(words));
  }
  return lex;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& path) { return parse(read_text_file(path)); }

SynonymLexicon SynonymLexicon::builtin() { return parse(kBuiltinLexicon); }

bool SynonymLexicon::are_synonyms(std::string_view a, std::string_view b) const {
  const auto ia = membership_.find(a);
  const auto ib = membership_.find(b);
  if (ia == membership_.end() || ib == membership_.end()) return false;
  for (std::size_t s : ia->second)
    if (ib->second.count(s)) return true;
  return false;
}

std::vector<std::string> SynonymLexicon::synonyms_of(std::string_view word) const {
  std::vector<std::string> out;
  const auto it = membership_.find(word);
  if (it == membership_.end()) return out;
  for (std::size_t s : it->second)
    for (const auto& w : sets_[s])
      if (w != word) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool SynonymLexicon::contains(std::string_view word) const { return membership_.find(word) != membership_.end(); }

}  // namespace neurorep::metrics
