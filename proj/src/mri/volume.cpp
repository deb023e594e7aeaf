// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "neurorep/error.hpp"
#include "neurorep/mri.hpp"

namespace neurorep::mri {

namespace {

constexpr char kPositive[] = {'R', 'A', 'S'};
constexpr char kNegative[] = {'L', 'P', 'I'};

void check_orientation(const Orientation& o) {
  bool used[3] = {false, false, false};
  for (int i = 0; i < 3; ++i) {
    const int a = o.axis[i];
    if (a < 0 || a > 2 || used[a] || (o.sign[i] != 1 && o.sign[i] != -1))
      fail(ErrorKind::format, "orientation is not a signed axis permutation");
    used[a] = true;
  }
}

}  // namespace

Orientation ras() { return Orientation{}; }

std::string to_string(const Orientation& o) {
  std::string s(3, '?');
  for (int i = 0; i < 3; ++i) s[i] = o.sign[i] > 0 ? kPositive[o.axis[i]] : kNegative[o.axis[i]];
  return s;
}

Orientation parse_orientation(std::string_view code) {
  if (code.size() != 3) fail(ErrorKind::format, "orientation code must have 3 letters: '" + std::string(code) + "'");
  Orientation o;
  bool used[3] = {false, false, false};
  for (int i = 0; i < 3; ++i) {
    int axis = -1, sign = 0;
    for (int a = 0; a < 3; ++a) {
      if (code[i] == kPositive[a]) axis = a, sign = 1;
      if (code[i] == kNegative[a]) axis = a, sign = -1;
    }
    if (axis < 0 || used[axis]) fail(ErrorKind::format, "bad orientation code '" + std::string(code) + "'");
    used[axis] = true;
    o.axis[i] = axis;
    o.sign[i] = sign;
  }
  return o;
}

void check_volume(const Volume3D& v) {
  for (int i = 0; i < 3; ++i) {
    if (v.dims[i] < 1) fail(ErrorKind::dimension, "volume dims must be >= 1");
    if (!(v.spacing[i] > 0.0) || !std::isfinite(v.spacing[i])) fail(ErrorKind::format, "voxel spacing must be > 0");
  }
  check_orientation(v.orientation);
  if (v.voxels.size() != v.size())
    fail(ErrorKind::dimension, "voxel count " + std::to_string(v.voxels.size()) + " does not match dims");
  for (double x : v.voxels)
    if (!std::isfinite(x)) fail(ErrorKind::numeric, "non-finite voxel value");
}

Volume3D make_volume(std::array<std::size_t, 3> dims, double fill) {
  Volume3D v;
  v.dims = dims;
  v.voxels.assign(v.size(), fill);
  return v;
}

Volume3D reorient(const Volume3D& in, const Orientation& target) {
  check_volume(in);
  check_orientation(target);
  if (in.orientation == target) return in;

  std::array<int, 3> src{};  // output axis k reads input axis src[k]
  std::array<bool, 3> flip{};
  Volume3D out;
  out.orientation = target;
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j)
      if (in.orientation.axis[j] == target.axis[k]) src[k] = j;
    flip[k] = in.orientation.sign[src[k]] != target.sign[k];
    out.dims[k] = in.dims[src[k]];
    out.spacing[k] = in.spacing[src[k]];
  }
  out.voxels.resize(out.size());

  std::array<std::size_t, 3> o{}, i{};
  std::size_t linear = 0;
  for (o[2] = 0; o[2] < out.dims[2]; ++o[2])
    for (o[1] = 0; o[1] < out.dims[1]; ++o[1])
      for (o[0] = 0; o[0] < out.dims[0]; ++o[0]) {
        for (int k = 0; k < 3; ++k) i[src[k]] = flip[k] ? out.dims[k] - 1 - o[k] : o[k];
        out.voxels[linear++] = in.at(i[0], i[1], i[2]);
      }
  return out;
}

Volume3D reorient_ras(const Volume3D& v) { return reorient(v, ras()); }

}  // namespace neurorep::mri
