// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "neurorep/align/decoder.hpp"
#include "neurorep/align/train.hpp"

namespace neurorep::align {

// "NRAM", uint32 version, uint32 entry count, then entries. An entry is a
// uint32 name length and name, a uint8 kind (0 matrix, 1 text), then either
// uint32 rows, uint32 cols and rows*cols column-major float64 values, or a
// uint32 length and bytes. Everything little-endian.
struct SavedModel {
  AlignmentModel model;
  std::optional<Decoder> decoder;
};

std::vector<std::uint8_t> serialize_model(const AlignmentModel& m, const Decoder* decoder = nullptr);
SavedModel deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const std::filesystem::path& path, const AlignmentModel& m, const Decoder* decoder = nullptr);
SavedModel load_model(const std::filesystem::path& path);

}  // namespace neurorep::align
