// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cstring>

#include "neurorep/error.hpp"
#include "neurorep/io.hpp"
#include "neurorep/mri.hpp"

namespace neurorep::mri {

namespace {

constexpr char kMagic[4] = {'N', 'R', 'S', 'L'};
constexpr std::size_t kSliceHeader = 20;

void put_u32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::string_view to_string(Plane p) {
  switch (p) {
    case Plane::axial: return "axial";
    case Plane::coronal: return "coronal";
    case Plane::sagittal: return "sagittal";
  }
  return "";
}

std::vector<std::size_t> central_indices(std::size_t n, std::size_t k) {
  if (k == 0 || k > n)
    fail(ErrorKind::bounds, "k_per_plane = " + std::to_string(k) + " must be in [1, " + std::to_string(n) + "]");
  std::vector<std::size_t> out(k);
  const std::size_t start = n / 2 - k / 2;
  for (std::size_t i = 0; i < k; ++i) out[i] = start + i;
  return out;
}

Slice2D extract_slice(const Volume3D& v, Plane plane, std::size_t index) {
  check_volume(v);
  Slice2D s;
  s.plane = plane;
  s.index = index;
  const auto [nx, ny, nz] = v.dims;
  switch (plane) {
    case Plane::axial:
      if (index >= nz) fail(ErrorKind::bounds, "axial index out of range");
      s.rows = ny, s.cols = nx;
      for (std::size_t r = 0; r < ny; ++r)
        for (std::size_t c = 0; c < nx; ++c) s.pixels.push_back(v.at(c, r, index));
      break;
    case Plane::coronal:
      if (index >= ny) fail(ErrorKind::bounds, "coronal index out of range");
      s.rows = nz, s.cols = nx;
      for (std::size_t r = 0; r < nz; ++r)
        for (std::size_t c = 0; c < nx; ++c) s.pixels.push_back(v.at(c, index, r));
      break;
    case Plane::sagittal:
      if (index >= nx) fail(ErrorKind::bounds, "sagittal index out of range");
      s.rows = nz, s.cols = ny;
      for (std::size_t r = 0; r < nz; ++r)
        for (std::size_t c = 0; c < ny; ++c) s.pixels.push_back(v.at(index, c, r));
      break;
  }
  return s;
}

std::vector<Slice2D> extract_central_slices(const Volume3D& v, std::size_t k_per_plane) {
  check_volume(v);
  const std::size_t min_dim = std::min({v.dims[0], v.dims[1], v.dims[2]});
  if (k_per_plane == 0 || k_per_plane > min_dim)
    fail(ErrorKind::bounds,
         "k_per_plane = " + std::to_string(k_per_plane) + " exceeds the smallest dimension " + std::to_string(min_dim));
  std::vector<Slice2D> out;
  const std::pair<Plane, std::size_t> planes[] = {
      {Plane::axial, v.dims[2]}, {Plane::coronal, v.dims[1]}, {Plane::sagittal, v.dims[0]}};
  for (const auto& [plane, n] : planes)
    for (std::size_t i : central_indices(n, k_per_plane)) out.push_back(extract_slice(v, plane, i));
  return out;
}

std::vector<std::uint8_t> encode_slice(const Slice2D& s) {
  if (s.pixels.size() != s.rows * s.cols) fail(ErrorKind::dimension, "slice pixel count does not match rows*cols");
  std::vector<std::uint8_t> buf(kMagic, kMagic + 4);
  put_u32(buf, static_cast<std::uint32_t>(s.plane));
  put_u32(buf, static_cast<std::uint32_t>(s.index));
  put_u32(buf, static_cast<std::uint32_t>(s.rows));
  put_u32(buf, static_cast<std::uint32_t>(s.cols));
  for (double p : s.pixels) put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(p)));
  return buf;
}

Slice2D decode_slice(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSliceHeader || std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(ErrorKind::format, "not a slice file");
  Slice2D s;
  const auto plane = get_u32(bytes, 4);
  if (plane > 2) fail(ErrorKind::format, "bad slice plane " + std::to_string(plane));
  s.plane = static_cast<Plane>(plane);
  s.index = get_u32(bytes, 8);
  s.rows = get_u32(bytes, 12);
  s.cols = get_u32(bytes, 16);
  if (bytes.size() != kSliceHeader + 4 * s.rows * s.cols) fail(ErrorKind::format, "slice payload size mismatch");
  s.pixels.resize(s.rows * s.cols);
  for (std::size_t i = 0; i < s.pixels.size(); ++i)
    s.pixels[i] = std::bit_cast<float>(get_u32(bytes, kSliceHeader + 4 * i));
  return s;
}

std::filesystem::path write_slices(const std::filesystem::path& dir, const std::string& patient_id,
                                   std::span<const Slice2D> slices) {
  nlohmann::ordered_json sidecar;
  sidecar["patient_id"] = patient_id;
  auto list = nlohmann::ordered_json::array();
  for (const auto& s : slices) {
    const std::string name = patient_id + "_" + std::string(to_string(s.plane)) + "_" + std::to_string(s.index) + ".nrsl";
    const auto bytes = encode_slice(s);
    write_binary_file(dir / name, bytes);
    nlohmann::ordered_json e;
    e["file"] = name;
    e["plane"] = to_string(s.plane);
    e["index"] = s.index;
    e["rows"] = s.rows;
    e["cols"] = s.cols;
    e["sha256"] = sha256_hex(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    list.push_back(std::move(e));
  }
  sidecar["slices"] = std::move(list);
  const auto path = dir / (patient_id + ".json");
  write_text_file(path, sidecar.dump(2) + "\n");
  return path;
}

std::vector<Slice2D> read_slices(const std::filesystem::path& dir, const std::string& patient_id) {
  const auto sidecar_path = dir / (patient_id + ".json");
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(read_text_file(sidecar_path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::format, sidecar_path.string() + ": " + e.what());
  }
  if (!sidecar.contains("slices") || !sidecar["slices"].is_array())
    fail(ErrorKind::format, sidecar_path.string() + ": no slice list");
  std::vector<Slice2D> out;
  for (const auto& e : sidecar["slices"]) {
    const std::string name = e.value("file", "");
    if (name.empty() || name.find('/') != std::string::npos)
      fail(ErrorKind::format, sidecar_path.string() + ": bad slice entry");
    const auto bytes = read_binary_file(dir / name);
    const auto digest = sha256_hex(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    if (digest != e.value("sha256", "")) fail(ErrorKind::format, name + ": digest mismatch");
    out.push_back(decode_slice(bytes));
  }
  if (out.empty()) fail(ErrorKind::input, sidecar_path.string() + ": no slices");
  return out;
}

}  // namespace neurorep::mri
