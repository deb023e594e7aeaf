// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cstring>

#include "neurorep/io.hpp"
#include "neurorep/mri.hpp"
#include "neurorep/rng.hpp"
#include "test_support.hpp"

using namespace neurorep;
using namespace neurorep::mri;

// Fixtures in tests/data were written by nibabel; voxel (x, y, z) holds
// x + 4y + 16z before scaling.

namespace {

void check_ramp(const Volume3D& v, double slope = 1.0, double inter = 0.0) {
  REQUIRE(v.dims == std::array<std::size_t, 3>{4, 4, 4});
  for (std::size_t z = 0; z < 4; ++z)
    for (std::size_t y = 0; y < 4; ++y)
      for (std::size_t x = 0; x < 4; ++x) CHECK(v.at(x, y, z) == static_cast<double>(x + 4 * y + 16 * z) * slope + inter);
}

}  // namespace

TEST_CASE("orientation codes") {
  CHECK(to_string(ras()) == "RAS");
  CHECK(to_string(parse_orientation("LPI")) == "LPI");
  CHECK(to_string(parse_orientation("PSR")) == "PSR");
  CHECK_THROWS_KIND(parse_orientation("RRS"), ErrorKind::format);
  CHECK_THROWS_KIND(parse_orientation("RA"), ErrorKind::format);
}

TEST_CASE("read float32 identity fixture") {
  const auto v = read_nifti_file(test_data("nifti_ras_f32.nii"));
  CHECK(to_string(v.orientation) == "RAS");
  check_ramp(v);
}

TEST_CASE("read big-endian fixture") {
  const auto v = read_nifti_file(test_data("nifti_ras_f32_be.nii"));
  CHECK(to_string(v.orientation) == "RAS");
  check_ramp(v);
}

TEST_CASE("read negated x with int16 scaling") {
  const auto v = read_nifti_file(test_data("nifti_las_i16_scaled.nii"));
  CHECK(to_string(v.orientation) == "LAS");
  check_ramp(v, 2.0, 1.0);
}

TEST_CASE("read qform-only permuted uint8 fixture") {
  const auto v = read_nifti_file(test_data("nifti_psr_u8_qform.nii"));
  CHECK(to_string(v.orientation) == "PSR");
  CHECK(v.spacing == std::array<double, 3>{2.0, 3.0, 4.0});
  check_ramp(v);
}

TEST_CASE("oblique affine is rejected") {
  CHECK_THROWS_KIND(read_nifti_file(test_data("nifti_oblique.nii")), ErrorKind::format);
}

TEST_CASE("header errors") {
  auto bytes = read_binary_file(test_data("nifti_ras_f32.nii"));
  auto two_file = bytes;
  std::memcpy(two_file.data() + 344, "ni1\0", 4);
  CHECK_THROWS_KIND(read_nifti(two_file), ErrorKind::format);

  auto bad_type = bytes;
  bad_type[70] = 64;  // float64
  bad_type[71] = 0;
  CHECK_THROWS_KIND(read_nifti(bad_type), ErrorKind::format);

  auto truncated = bytes;
  truncated.resize(400);
  CHECK_THROWS_KIND(read_nifti(truncated), ErrorKind::format);

  CHECK_THROWS_KIND(read_nifti(std::vector<std::uint8_t>(100, 0)), ErrorKind::format);
}

TEST_CASE("writer round trip for every datatype and orientation") {
  Rng rng(3);
  for (const char* code : {"RAS", "LAS", "PSR", "ILA"}) {
    Volume3D v = make_volume({3, 5, 4});
    v.orientation = parse_orientation(code);
    v.spacing = {1.5, 2.0, 0.75};
    for (double& x : v.voxels) x = static_cast<double>(rng.uniform_index(200));
    for (auto type : {NiftiType::uint8, NiftiType::int16, NiftiType::float32}) {
      const auto back = read_nifti(write_nifti(v, type));
      CHECK(back == v);
    }
  }
}

TEST_CASE("identity fixture matches our writer") {
  Volume3D v = make_volume({4, 4, 4});
  for (std::size_t i = 0; i < v.size(); ++i) v.voxels[i] = static_cast<double>(i);
  CHECK(read_nifti(write_nifti(v)) == read_nifti_file(test_data("nifti_ras_f32.nii")));
}
