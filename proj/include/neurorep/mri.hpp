// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace neurorep::mri {

// Voxel axis i runs along world axis `axis[i]` (0 = R/L, 1 = A/P, 2 = S/I);
// sign[i] is +1 when increasing the index moves toward R, A or S.
struct Orientation {
  std::array<int, 3> axis{0, 1, 2};
  std::array<int, 3> sign{1, 1, 1};

  bool operator==(const Orientation&) const = default;
};

Orientation ras();
std::string to_string(const Orientation& o);        // e.g. "RAS", "LAS", "PSR"
Orientation parse_orientation(std::string_view code);  // format error on junk

// Scalar volume; voxels are stored x fastest, then y, then z.
struct Volume3D {
  std::array<std::size_t, 3> dims{1, 1, 1};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  Orientation orientation;
  std::vector<double> voxels;

  std::size_t size() const { return dims[0] * dims[1] * dims[2]; }
  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const { return x + dims[0] * (y + dims[1] * z); }
  double& at(std::size_t x, std::size_t y, std::size_t z) { return voxels[index(x, y, z)]; }
  double at(std::size_t x, std::size_t y, std::size_t z) const { return voxels[index(x, y, z)]; }

  bool operator==(const Volume3D&) const = default;
};

// Checks dims >= 1, spacing > 0, voxel count and finiteness.
void check_volume(const Volume3D& v);
Volume3D make_volume(std::array<std::size_t, 3> dims, double fill = 0.0);

// --- NIfTI-1 ---------------------------------------------------------------

enum class NiftiType : std::int16_t { uint8 = 2, int16 = 4, float32 = 16 };

// Single-file NIfTI-1 in either byte order. Orientation comes from the sform
// when set, else the qform, else the default scanner frame (RAS). Affines
// with an off-axis direction cosine of 1e-3 or more are rejected.
Volume3D read_nifti(std::span<const std::uint8_t> bytes);
Volume3D read_nifti_file(const std::filesystem::path& path);

// Little-endian writer with an axis-aligned sform built from the volume's
// orientation and spacing. Integer types round and saturate.
std::vector<std::uint8_t> write_nifti(const Volume3D& v, NiftiType type = NiftiType::float32);
void write_nifti_file(const std::filesystem::path& path, const Volume3D& v, NiftiType type = NiftiType::float32);

// --- transforms ------------------------------------------------------------

// Permutes and flips axes so the result has orientation `target`. Voxel
// values are moved, never interpolated.
Volume3D reorient(const Volume3D& v, const Orientation& target);
Volume3D reorient_ras(const Volume3D& v);

// clamp((v - Plo) / (Phi - Plo), 0, 1) with linearly interpolated
// percentiles. Degenerate-input error when Phi <= Plo.
Volume3D normalize_percentile(const Volume3D& v, double p_lo = 2.0, double p_hi = 98.0);

// Truncated Gaussian, radius ceil(3 sigma), weights summing to 1.
std::vector<double> gaussian_kernel(double sigma);

// Index into [0, n) for a possibly out-of-range i under half-sample
// symmetric reflection (d c b a | a b c d | d c b a).
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n);

// Separable convolution along x, y, z with reflect boundaries.
Volume3D gaussian_smooth(const Volume3D& v, double sigma = 0.5);

// v^gamma; ordering error for values outside [0, 1].
Volume3D gamma_correct(const Volume3D& v, double gamma = 0.8);

// Zeroes voxels strictly below the pct-th percentile.
Volume3D remove_background(const Volume3D& v, double pct = 1.0);

// --- slices ----------------------------------------------------------------

enum class Plane : std::uint32_t { axial = 0, coronal = 1, sagittal = 2 };

std::string_view to_string(Plane p);

// Axial: fixed z, rows y, cols x. Coronal: fixed y, rows z, cols x.
// Sagittal: fixed x, rows z, cols y. Pixels row-major.
struct Slice2D {
  Plane plane = Plane::axial;
  std::size_t index = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> pixels;

  double at(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }
  bool operator==(const Slice2D&) const = default;
};

// k contiguous indices starting at floor(n/2) - floor(k/2).
std::vector<std::size_t> central_indices(std::size_t n, std::size_t k);
Slice2D extract_slice(const Volume3D& v, Plane plane, std::size_t index);

// Axial, then coronal, then sagittal; bounds error when k is 0 or exceeds
// any dimension.
std::vector<Slice2D> extract_central_slices(const Volume3D& v, std::size_t k_per_plane);

// Binary slice file: "NRSL", then uint32 LE plane, index, rows, cols, then
// rows*cols float32 LE values, row-major.
std::vector<std::uint8_t> encode_slice(const Slice2D& s);
Slice2D decode_slice(std::span<const std::uint8_t> bytes);

// Writes <dir>/<patient>_<plane>_<index>.nrsl files and <dir>/<patient>.json
// listing them with their SHA-256 digests. Returns the sidecar path.
std::filesystem::path write_slices(const std::filesystem::path& dir, const std::string& patient_id,
                                   std::span<const Slice2D> slices);

// Reads the slices listed in <dir>/<patient>.json back in listed order;
// format error when a file is missing or its digest does not match.
std::vector<Slice2D> read_slices(const std::filesystem::path& dir, const std::string& patient_id);

// --- pipeline --------------------------------------------------------------

struct PreprocessOptions {
  double p_lo = 2.0;
  double p_hi = 98.0;
  double sigma = 0.5;
  double gamma = 0.8;
  double background_pct = 1.0;
  std::size_t k_per_plane = 8;

  static PreprocessOptions from_json(const nlohmann::json& j);  // missing keys keep defaults
};

struct PreprocessTrace {
  Volume3D oriented;
  Volume3D normalized;
  Volume3D smoothed;
  Volume3D gamma;
  Volume3D cleaned;
  std::vector<Slice2D> slices;
};

// reorient_ras, normalize_percentile, gaussian_smooth, gamma_correct,
// remove_background, extract_central_slices.
PreprocessTrace preprocess_trace(const Volume3D& v, const PreprocessOptions& opts = {});
std::vector<Slice2D> preprocess_pipeline(const Volume3D& v, const PreprocessOptions& opts = {});

// --- phantoms --------------------------------------------------------------

struct PhantomSpec {
  std::size_t n = 32;
  double left_scale = 1.0;   // relative size of the left hippocampal blob
  double right_scale = 1.0;
  double atrophy = 0.0;      // 0..1, widens ventricles and thins cortex
  double noise = 0.05;
  Orientation orientation;   // stored orientation of the output
};

// Head-like ellipsoid phantom with two medial temporal blobs whose size
// follows `spec`. Intensities are roughly in scanner units (0..1000).
Volume3D make_phantom(const PhantomSpec& spec, std::uint64_t seed);

}  // namespace neurorep::mri
