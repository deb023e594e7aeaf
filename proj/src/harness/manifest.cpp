// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "neurorep/error.hpp"
#include "neurorep/harness.hpp"
#include "neurorep/io.hpp"

namespace neurorep::harness {

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["inputs"] = inputs;
  auto st = nlohmann::ordered_json::array();
  for (const auto& s : stages) {
    nlohmann::ordered_json e{{"name", s.name}, {"status", s.status}};
    if (!s.detail.empty()) e["detail"] = s.detail;
    st.push_back(std::move(e));
  }
  j["stages"] = std::move(st);
  j["artifacts"] = artifacts;
  return j;
}

bool RunManifest::ok() const {
  return std::all_of(stages.begin(), stages.end(), [](const StageRecord& s) { return s.status == "ok"; });
}

int RunManifest::exit_code() const {
  for (const auto& s : stages)
    if (s.status == "failed") return s.exit_code;
  return 0;
}

std::map<std::string, std::string> digest_tree(const std::filesystem::path& dir, std::span<const std::string> exclude) {
  std::map<std::string, std::string> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), dir).generic_string();
    if (std::find(exclude.begin(), exclude.end(), rel) != exclude.end()) continue;
    out[rel] = sha256_file(entry.path());
  }
  return out;
}

}  // namespace neurorep::harness
