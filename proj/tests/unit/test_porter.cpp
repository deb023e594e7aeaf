// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "neurorep/metrics/porter.hpp"
#include "test_support.hpp"

using neurorep::metrics::porter_stem;

TEST_CASE("porter examples") {
  CHECK(porter_stem("running") == "run");
  CHECK(porter_stem("cat") == "cat");
  CHECK(porter_stem("atrophies") == "atrophi");
}

TEST_CASE("short words pass through") {
  CHECK(porter_stem("is") == "is");
  CHECK(porter_stem("a") == "a");
  CHECK(porter_stem("") == "");
}

// Stems produced by an independent implementation of the same rule set.
TEST_CASE("porter agrees with reference stems") {
  std::ifstream in(test_data("porter_vectors.txt"));
  REQUIRE(in);
  int checked = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string word, stem;
    fields >> word >> stem;
    CHECK_MESSAGE(porter_stem(word) == stem, word);
    ++checked;
  }
  CHECK(checked > 300);
}
