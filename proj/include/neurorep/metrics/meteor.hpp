// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neurorep/metrics/lexicon.hpp"
#include "neurorep/metrics/tokenize.hpp"

namespace neurorep::metrics {

using Stemmer = std::function<std::string(std::string_view)>;

struct MeteorResources {
  Stemmer stemmer;          // empty: stem stage skipped
  SynonymLexicon lexicon;   // empty lexicon: synonym stage matches nothing

  // Porter stemmer plus the built-in clinical lexicon.
  static MeteorResources defaults();
};

enum class MatchStage { exact, stem, synonym };

struct MeteorMatch {
  std::size_t cand_pos;
  std::size_t ref_pos;
  MatchStage stage;
};

struct MeteorAlignment {
  std::vector<MeteorMatch> matches;  // ordered by candidate position
  std::size_t chunks = 0;
};

// Staged greedy alignment: exact, then stem, then synonym. Within a stage,
// candidate tokens are visited left to right and each takes the leftmost
// still-unmatched reference token that matches. A chunk is a maximal run of
// matches adjacent in both sequences.
MeteorAlignment meteor_align(const TokenSequence& cand, const TokenSequence& ref, const MeteorResources& res);

struct MeteorScore {
  double precision = 0.0;
  double recall = 0.0;
  double fmean = 0.0;     // 10PR / (R + 9P)
  double penalty = 0.0;   // 0.5 (chunks / matches)^3
  double score = 0.0;     // fmean * (1 - penalty)
  std::size_t matches = 0;
  std::size_t chunks = 0;
};

MeteorScore meteor_detail(const TokenSequence& cand, const TokenSequence& ref, const MeteorResources& res);

double meteor(const TokenSequence& cand, const TokenSequence& ref, const MeteorResources& res);

}  // namespace neurorep::metrics
