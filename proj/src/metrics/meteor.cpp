// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/metrics/meteor.hpp"

#include <algorithm>

#include "neurorep/metrics/porter.hpp"

namespace neurorep::metrics {

MeteorResources MeteorResources::defaults() {
  return MeteorResources{[](std::string_view w) { return porter_stem(w); }, SynonymLexicon::builtin()};
}

MeteorAlignment meteor_align(const TokenSequence& cand, const TokenSequence& ref, const MeteorResources& res) {
  MeteorAlignment out;
  std::vector<bool> cand_used(cand.size(), false);
  std::vector<bool> ref_used(ref.size(), false);

  auto run_stage = [&](MatchStage stage, auto&& matches) {
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (cand_used[i]) continue;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (ref_used[j] || !matches(i, j)) continue;
        cand_used[i] = true;
        ref_used[j] = true;
        out.matches.push_back({i, j, stage});
        break;
      }
    }
  };

  run_stage(MatchStage::exact, [&](std::size_t i, std::size_t j) { return cand[i] == ref[j]; });

  if (res.stemmer) {
    std::vector<std::string> cand_stems(cand.size());
    std::vector<std::string> ref_stems(ref.size());
    for (std::size_t i = 0; i < cand.size(); ++i) cand_stems[i] = res.stemmer(cand[i]);
    for (std::size_t j = 0; j < ref.size(); ++j) ref_stems[j] = res.stemmer(ref[j]);
    run_stage(MatchStage::stem, [&](std::size_t i, std::size_t j) { return cand_stems[i] == ref_stems[j]; });
  }

  if (res.lexicon.set_count() > 0) {
    run_stage(MatchStage::synonym,
              [&](std::size_t i, std::size_t j) { return res.lexicon.are_synonyms(cand[i], ref[j]); });
  }

  std::sort(out.matches.begin(), out.matches.end(),
            [](const MeteorMatch& a, const MeteorMatch& b) { return a.cand_pos < b.cand_pos; });
  for (std::size_t k = 0; k < out.matches.size(); ++k) {
    const bool continues = k > 0 && out.matches[k].cand_pos == out.matches[k - 1].cand_pos + 1 &&
                           out.matches[k].ref_pos == out.matches[k - 1].ref_pos + 1;
    if (!continues) ++out.chunks;
  }
  return out;
}

MeteorScore meteor_detail(const TokenSequence& cand, const TokenSequence& ref, const MeteorResources& res) {
  MeteorScore s;
  const auto alignment = meteor_align(cand, ref, res);
  s.matches = alignment.matches.size();
  s.chunks = alignment.chunks;
  if (s.matches == 0) return s;
  const auto m = static_cast<double>(s.matches);
  s.precision = m / static_cast<double>(cand.size());
  s.recall = m / static_cast<double>(ref.size());
  s.fmean = 10.0 * s.precision * s.recall / (s.recall + 9.0 * s.precision);
  const double frag = static_cast<double>(s.chunks) / m;
  s.penalty = 0.5 * frag * frag * frag;
  s.score = s.fmean * (1.0 - s.penalty);
  return s;
}

double meteor(const TokenSequence& cand, const TokenSequence& ref, const MeteorResources& res) {
  return meteor_detail(cand, ref, res).score;
}

}  // namespace neurorep::metrics
