// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "neurorep/align/layers.hpp"
#include "neurorep/rng.hpp"

namespace gradcheck {

using neurorep::align::Mat;
using neurorep::align::Vec;

inline constexpr double kStep = 1e-5;

// Central differences of f() with respect to param[c] for every c in coords.
template <class F>
Vec numeric(F&& f, double* param, const std::vector<std::size_t>& coords, double h = kStep) {
  Vec out(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) {
    double& p = param[coords[i]];
    const double saved = p;
    p = saved + h;
    const double up = f();
    p = saved - h;
    const double down = f();
    p = saved;
    out[static_cast<Eigen::Index>(i)] = (up - down) / (2.0 * h);
  }
  return out;
}

inline Vec gather(const double* g, const std::vector<std::size_t>& coords) {
  Vec out(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) out[static_cast<Eigen::Index>(i)] = g[coords[i]];
  return out;
}

// max |a - n| / max(max |a|, max |n|); 0 when both vanish.
inline double rel_error(const Vec& a, const Vec& n) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), n.cwiseAbs().maxCoeff());
  if (scale == 0.0) return 0.0;
  return (a - n).cwiseAbs().maxCoeff() / scale;
}

// k distinct coordinates out of n (all of them when k >= n), sorted.
inline std::vector<std::size_t> pick(std::size_t n, std::size_t k, neurorep::Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (k >= n) return idx;
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline Mat random_mat(Eigen::Index r, Eigen::Index c, neurorep::Rng& rng, double sd = 1.0) {
  Mat m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = sd * rng.normal();
  return m;
}

inline Vec random_vec(Eigen::Index n, neurorep::Rng& rng, double sd = 1.0) { return random_mat(n, 1, rng, sd).col(0); }

}  // namespace gradcheck
