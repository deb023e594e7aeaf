// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "neurorep/error.hpp"
#include "neurorep/mri.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::mri {

namespace {

struct Ellipsoid {
  double cx, cy, cz;
  double rx, ry, rz;

  bool contains(double x, double y, double z) const {
    const double a = (x - cx) / rx, b = (y - cy) / ry, c = (z - cz) / rz;
    return a * a + b * b + c * c <= 1.0;
  }
};

}  // namespace

Volume3D make_phantom(const PhantomSpec& spec, std::uint64_t seed) {
  if (spec.n < 4) fail(ErrorKind::config, "phantom size must be >= 4");
  if (!(spec.left_scale > 0.0) || !(spec.right_scale > 0.0)) fail(ErrorKind::config, "blob scales must be > 0");
  const double atrophy = std::clamp(spec.atrophy, 0.0, 1.0);
  const std::size_t n = spec.n;
  Volume3D v = make_volume({n, n, n});

  const Ellipsoid head{0, 0, 0, 0.88, 0.94, 0.84};
  const Ellipsoid brain{0, 0, 0, 0.78 - 0.08 * atrophy, 0.84 - 0.08 * atrophy, 0.74 - 0.08 * atrophy};
  const Ellipsoid white{0, 0.02, 0.05, 0.55, 0.62, 0.5};
  const double vr = 0.09 * (1.0 + 1.2 * atrophy);
  const Ellipsoid vent_l{-0.12, 0.05, 0.1, vr, 2.2 * vr, 1.3 * vr};
  const Ellipsoid vent_r{0.12, 0.05, 0.1, vr, 2.2 * vr, 1.3 * vr};
  const double hl = 0.13 * std::cbrt(spec.left_scale), hr = 0.13 * std::cbrt(spec.right_scale);
  // Left hemisphere is toward -x in RAS.
  const Ellipsoid hip_l{-0.34, -0.12, -0.28, hl, 1.8 * hl, hl};
  const Ellipsoid hip_r{0.34, -0.12, -0.28, hr, 1.8 * hr, hr};

  Rng rng(derive_seed(seed, {0x7068616eULL}));
  const double half = static_cast<double>(n) / 2.0;
  for (std::size_t z = 0; z < n; ++z)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x) {
        const double px = (static_cast<double>(x) + 0.5 - half) / half;
        const double py = (static_cast<double>(y) + 0.5 - half) / half;
        const double pz = (static_cast<double>(z) + 0.5 - half) / half;
        double val = 20.0;
        if (head.contains(px, py, pz)) val = 320.0;
        if (brain.contains(px, py, pz)) val = 640.0;
        if (white.contains(px, py, pz)) val = 860.0;
        if (vent_l.contains(px, py, pz) || vent_r.contains(px, py, pz)) val = 160.0;
        if (hip_l.contains(px, py, pz) || hip_r.contains(px, py, pz)) val = 560.0;
        val += spec.noise * 200.0 * rng.normal();
        v.at(x, y, z) = std::max(0.0, val);
      }
  return reorient(v, spec.orientation);
}

}  // namespace neurorep::mri
