// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "neurorep/error.hpp"
#include "neurorep/io.hpp"
#include "neurorep/mri.hpp"

namespace neurorep::mri {

namespace {

constexpr std::size_t kHeaderSize = 348;
constexpr std::size_t kMinVoxOffset = 352;
constexpr double kObliqueTolerance = 1e-3;

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, bool swap) : bytes_(bytes), swap_(swap) {}

  template <class T>
  T get(std::size_t offset) const {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + offset, sizeof(T));
    if (swap_) std::reverse(raw, raw + sizeof(T));
    T v;
    std::memcpy(&v, raw, sizeof(T));
    return v;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  bool swap_;
};

using Mat3 = std::array<std::array<double, 3>, 3>;  // m[row][col]

Mat3 quaternion_matrix(double b, double c, double d, double qfac) {
  double a = 1.0 - (b * b + c * c + d * d);
  if (a < 1e-7) {
    const double s = 1.0 / std::sqrt(b * b + c * c + d * d);
    b *= s, c *= s, d *= s;
    a = 0.0;
  } else {
    a = std::sqrt(a);
  }
  Mat3 r{{{a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)},
          {2 * (b * c + a * d), a * a + c * c - b * b - d * d, 2 * (c * d - a * b)},
          {2 * (b * d - a * c), 2 * (c * d + a * b), a * a + d * d - c * c - b * b}}};
  if (qfac < 0)
    for (auto& row : r) row[2] = -row[2];
  return r;
}

Orientation orientation_of(const Mat3& m) {
  Orientation o;
  bool used[3] = {false, false, false};
  for (int j = 0; j < 3; ++j) {
    const double norm = std::sqrt(m[0][j] * m[0][j] + m[1][j] * m[1][j] + m[2][j] * m[2][j]);
    if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorKind::format, "degenerate affine column");
    int dom = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(m[i][j]) > std::abs(m[dom][j])) dom = i;
    for (int i = 0; i < 3; ++i)
      if (i != dom && std::abs(m[i][j]) / norm >= kObliqueTolerance)
        fail(ErrorKind::format, "oblique affine: axis " + std::to_string(j) + " direction cosine " +
                                    format_double(m[i][j] / norm) + " exceeds tolerance");
    if (used[dom]) fail(ErrorKind::format, "affine maps two voxel axes onto one world axis");
    used[dom] = true;
    o.axis[j] = dom;
    o.sign[j] = m[dom][j] > 0 ? 1 : -1;
  }
  return o;
}

// Little-endian store.
template <class T>
void put(std::vector<std::uint8_t>& buf, std::size_t offset, T v) {
  std::memcpy(buf.data() + offset, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf.data() + offset, buf.data() + offset + sizeof(T));
}

}  // namespace

Volume3D read_nifti(std::span<const std::uint8_t> bytes) {
  static_assert(std::numeric_limits<float>::is_iec559);
  if (bytes.size() < kHeaderSize) fail(ErrorKind::format, "file shorter than a NIfTI-1 header");

  bool swap = false;
  if (Reader(bytes, false).get<std::int32_t>(0) != static_cast<std::int32_t>(kHeaderSize)) {
    swap = true;
    if (Reader(bytes, true).get<std::int32_t>(0) != static_cast<std::int32_t>(kHeaderSize))
      fail(ErrorKind::format, "not a NIfTI-1 header (sizeof_hdr != 348)");
  }
  const Reader h(bytes, swap);

  if (std::memcmp(bytes.data() + 344, "n+1\0", 4) != 0) {
    if (std::memcmp(bytes.data() + 344, "ni1\0", 4) == 0)
      fail(ErrorKind::format, "two-file NIfTI (.hdr/.img) is not supported");
    fail(ErrorKind::format, "bad NIfTI magic");
  }

  const int ndim = h.get<std::int16_t>(40);
  if (ndim < 3 || ndim > 7) fail(ErrorKind::format, "expected a 3-D volume, dim[0] = " + std::to_string(ndim));
  Volume3D v;
  for (int i = 0; i < 3; ++i) {
    const int d = h.get<std::int16_t>(42 + 2 * i);
    if (d < 1) fail(ErrorKind::format, "dim[" + std::to_string(i + 1) + "] must be >= 1");
    v.dims[i] = static_cast<std::size_t>(d);
  }
  for (int i = 4; i <= ndim; ++i)
    if (h.get<std::int16_t>(40 + 2 * i) > 1) fail(ErrorKind::format, "only single 3-D volumes are supported");

  const int datatype = h.get<std::int16_t>(70);
  std::size_t bpp = 0;
  switch (datatype) {
    case 2: bpp = 1; break;
    case 4: bpp = 2; break;
    case 16: bpp = 4; break;
    default: fail(ErrorKind::format, "unsupported NIfTI datatype " + std::to_string(datatype));
  }

  const double vox_offset_f = h.get<float>(108);
  std::size_t offset = kMinVoxOffset;
  if (vox_offset_f > static_cast<double>(kMinVoxOffset)) offset = static_cast<std::size_t>(vox_offset_f);
  const std::size_t n = v.size();
  if (offset + n * bpp > bytes.size()) fail(ErrorKind::format, "voxel data truncated");

  double slope = h.get<float>(112);
  double inter = h.get<float>(116);
  if (slope == 0.0 || !std::isfinite(slope) || !std::isfinite(inter)) slope = 1.0, inter = 0.0;

  v.voxels.resize(n);
  const Reader data(bytes, swap);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t at = offset + i * bpp;
    double raw = 0.0;
    switch (datatype) {
      case 2: raw = bytes[at]; break;
      case 4: raw = data.get<std::int16_t>(at); break;
      case 16: raw = data.get<float>(at); break;
    }
    v.voxels[i] = raw * slope + inter;
  }

  Mat3 m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const int qform_code = h.get<std::int16_t>(252);
  const int sform_code = h.get<std::int16_t>(254);
  if (sform_code > 0) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m[r][c] = h.get<float>(280 + 16 * r + 4 * c);
  } else if (qform_code > 0) {
    const double qfac = h.get<float>(76);
    m = quaternion_matrix(h.get<float>(256), h.get<float>(260), h.get<float>(264), qfac < 0 ? -1.0 : 1.0);
  }
  v.orientation = orientation_of(m);

  for (int i = 0; i < 3; ++i) {
    double s = std::abs(static_cast<double>(h.get<float>(80 + 4 * i)));
    if (!(s > 0.0) || !std::isfinite(s))
      s = std::sqrt(m[0][i] * m[0][i] + m[1][i] * m[1][i] + m[2][i] * m[2][i]);
    v.spacing[i] = s;
  }
  check_volume(v);
  return v;
}

Volume3D read_nifti_file(const std::filesystem::path& path) {
  const auto bytes = read_binary_file(path);
  try {
    return read_nifti(bytes);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> write_nifti(const Volume3D& v, NiftiType type) {
  check_volume(v);
  std::size_t bpp = 4;
  if (type == NiftiType::uint8) bpp = 1;
  if (type == NiftiType::int16) bpp = 2;
  std::vector<std::uint8_t> buf(kMinVoxOffset + v.size() * bpp, 0);

  put<std::int32_t>(buf, 0, static_cast<std::int32_t>(kHeaderSize));
  put<std::int16_t>(buf, 40, 3);
  for (int i = 0; i < 3; ++i) put<std::int16_t>(buf, 42 + 2 * i, static_cast<std::int16_t>(v.dims[i]));
  for (int i = 3; i < 7; ++i) put<std::int16_t>(buf, 42 + 2 * i, 1);
  put<std::int16_t>(buf, 70, static_cast<std::int16_t>(type));
  put<std::int16_t>(buf, 72, static_cast<std::int16_t>(8 * bpp));
  put<float>(buf, 76, 1.0f);
  for (int i = 0; i < 3; ++i) put<float>(buf, 80 + 4 * i, static_cast<float>(v.spacing[i]));
  put<float>(buf, 108, static_cast<float>(kMinVoxOffset));
  put<float>(buf, 112, 1.0f);
  put<std::uint8_t>(buf, 123, 10);  // xyzt_units: mm, s
  put<std::int16_t>(buf, 252, 0);
  put<std::int16_t>(buf, 254, 1);
  for (int j = 0; j < 3; ++j) {
    const int row = v.orientation.axis[j];
    put<float>(buf, 280 + 16 * row + 4 * j, static_cast<float>(v.orientation.sign[j] * v.spacing[j]));
  }
  std::memcpy(buf.data() + 344, "n+1\0", 4);

  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t at = kMinVoxOffset + i * bpp;
    const double x = v.voxels[i];
    switch (type) {
      case NiftiType::uint8: buf[at] = static_cast<std::uint8_t>(std::clamp(std::round(x), 0.0, 255.0)); break;
      case NiftiType::int16:
        put<std::int16_t>(buf, at, static_cast<std::int16_t>(std::clamp(std::round(x), -32768.0, 32767.0)));
        break;
      case NiftiType::float32: put<float>(buf, at, static_cast<float>(x)); break;
    }
  }
  return buf;
}

void write_nifti_file(const std::filesystem::path& path, const Volume3D& v, NiftiType type) {
  write_binary_file(path, write_nifti(v, type));
}

}  // namespace neurorep::mri
