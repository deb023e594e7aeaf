// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "neurorep/error.hpp"
#include "neurorep/io.hpp"
#include "neurorep/mri.hpp"
#include "neurorep/stats.hpp"

namespace neurorep::mri {

namespace {

// Rounding in the separable sums can push a convex combination of [0, 1]
// values a few ulps outside the interval.
constexpr double kUnitSlack = 1e-9;

void check_percent(double p, const char* what) {
  if (!(p >= 0.0 && p <= 100.0)) fail(ErrorKind::config, std::string(what) + " must be in [0, 100]");
}

}  // namespace

Volume3D normalize_percentile(const Volume3D& v, double p_lo, double p_hi) {
  check_volume(v);
  check_percent(p_lo, "p_lo");
  check_percent(p_hi, "p_hi");
  if (!(p_lo < p_hi)) fail(ErrorKind::config, "p_lo must be below p_hi");
  std::vector<double> sorted = v.voxels;
  std::sort(sorted.begin(), sorted.end());
  const double lo = percentile_sorted(sorted, p_lo);
  const double hi = percentile_sorted(sorted, p_hi);
  if (!(hi > lo))
    fail(ErrorKind::degenerate_input, "volume is constant between the " + format_double(p_lo) + "th and " +
                                          format_double(p_hi) + "th percentiles");
  Volume3D out = v;
  const double range = hi - lo;
  for (double& x : out.voxels) x = std::clamp((x - lo) / range, 0.0, 1.0);
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorKind::config, "gaussian sigma must be > 0");
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const double x = static_cast<double>(k);
    w[static_cast<std::size_t>(k + radius)] = std::exp(-(x * x) / (2.0 * sigma * sigma));
  }
  for (double x : w) sum += x;
  for (double& x : w) x /= sum;
  return w;
}

std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  const auto period = static_cast<std::ptrdiff_t>(2 * n);
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(n)) m = period - 1 - m;
  return static_cast<std::size_t>(m);
}

Volume3D gaussian_smooth(const Volume3D& v, double sigma) {
  check_volume(v);
  const auto w = gaussian_kernel(sigma);
  const auto radius = static_cast<std::ptrdiff_t>(w.size() / 2);
  Volume3D cur = v;
  Volume3D next = v;
  for (int axis = 0; axis < 3; ++axis) {
    const std::size_t n = v.dims[axis];
    const std::size_t stride = axis == 0 ? 1 : axis == 1 ? v.dims[0] : v.dims[0] * v.dims[1];
    for (std::size_t z = 0; z < v.dims[2]; ++z)
      for (std::size_t y = 0; y < v.dims[1]; ++y)
        for (std::size_t x = 0; x < v.dims[0]; ++x) {
          const std::size_t pos[3] = {x, y, z};
          const std::size_t base = v.index(x, y, z) - pos[axis] * stride;
          double acc = 0.0;
          for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
            const std::size_t j = reflect_index(static_cast<std::ptrdiff_t>(pos[axis]) + k, n);
            acc += w[static_cast<std::size_t>(k + radius)] * cur.voxels[base + j * stride];
          }
          next.voxels[v.index(x, y, z)] = acc;
        }
    std::swap(cur, next);
  }
  return cur;
}

Volume3D gamma_correct(const Volume3D& v, double gamma) {
  check_volume(v);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail(ErrorKind::config, "gamma must be > 0");
  Volume3D out = v;
  for (double& x : out.voxels) {
    if (x < -kUnitSlack || x > 1.0 + kUnitSlack)
      fail(ErrorKind::ordering, "gamma correction needs values in [0, 1], found " + format_double(x) +
                                    "; normalize first");
    x = std::pow(std::clamp(x, 0.0, 1.0), gamma);
  }
  return out;
}

Volume3D remove_background(const Volume3D& v, double pct) {
  check_volume(v);
  check_percent(pct, "background percentile");
  const double threshold = percentile(v.voxels, pct);
  Volume3D out = v;
  for (double& x : out.voxels)
    if (x < threshold) x = 0.0;
  return out;
}

PreprocessOptions PreprocessOptions::from_json(const nlohmann::json& j) {
  PreprocessOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) fail(ErrorKind::config, "preprocess options must be an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "p_lo") o.p_lo = value.get<double>();
      else if (key == "p_hi") o.p_hi = value.get<double>();
      else if (key == "sigma") o.sigma = value.get<double>();
      else if (key == "gamma") o.gamma = value.get<double>();
      else if (key == "background_pct") o.background_pct = value.get<double>();
      else if (key == "k_per_plane") o.k_per_plane = value.get<std::size_t>();
      else fail(ErrorKind::config, "unknown preprocess option '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config, std::string("bad preprocess option: ") + e.what());
  }
  return o;
}

PreprocessTrace preprocess_trace(const Volume3D& v, const PreprocessOptions& opts) {
  PreprocessTrace t;
  t.oriented = reorient_ras(v);
  t.normalized = normalize_percentile(t.oriented, opts.p_lo, opts.p_hi);
  t.smoothed = gaussian_smooth(t.normalized, opts.sigma);
  t.gamma = gamma_correct(t.smoothed, opts.gamma);
  t.cleaned = remove_background(t.gamma, opts.background_pct);
  t.slices = extract_central_slices(t.cleaned, opts.k_per_plane);
  return t;
}

std::vector<Slice2D> preprocess_pipeline(const Volume3D& v, const PreprocessOptions& opts) {
  return preprocess_trace(v, opts).slices;
}

}  // namespace neurorep::mri
