// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace neurorep::metrics {

// Synonym sets, one per line, words separated by spaces. A word may belong
// to several sets; two words are synonyms when they share any set. Lines
// starting with '#' are comments.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;

  static SynonymLexicon parse(std::string_view text);
  static SynonymLexicon load(const std::filesystem::path& path);

  // Small clinical lexicon covering the phrasings used by the report
  // templates; shipped so scoring and augmentation work without a file.
  static SynonymLexicon builtin();

  bool are_synonyms(std::string_view a, std::string_view b) const;

  // Other members of every set containing `word`, sorted, without `word`.
  std::vector<std::string> synonyms_of(std::string_view word) const;

  bool contains(std::string_view word) const;
  std::size_t set_count() const noexcept { return sets_.size(); }

 private:
  std::vector<std::vector<std::string>> sets_;
  std::map<std::string, std::set<std::size_t>, std::less<>> membership_;
};

}  // namespace neurorep::metrics
