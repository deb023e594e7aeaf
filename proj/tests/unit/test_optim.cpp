// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "neurorep/align/optim.hpp"
#include "neurorep/rng.hpp"
#include "test_support.hpp"

using namespace neurorep;
using namespace neurorep::align;

TEST_CASE("AdamW decay-only step") {
  std::vector<double> p{1.0}, g{0.0};
  AdamW opt(1e-3, 0.01);
  opt.step({p}, {g});
  CHECK(p[0] == doctest::Approx(0.99999).epsilon(1e-15));
  CHECK(opt.steps() == 1);
}

TEST_CASE("AdamW first step moves by lr against the gradient sign") {
  std::vector<double> p{0.5, -2.0, 3.0}, g{0.3, -7.0, 1e-3};
  AdamW opt(1e-3, 0.0);
  opt.step({p}, {g});
  CHECK(p[0] == doctest::Approx(0.5 - 1e-3).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(-2.0 + 1e-3).epsilon(1e-9));
  CHECK(p[2] == doctest::Approx(3.0 - 1e-3).epsilon(1e-7));
}

TEST_CASE("AdamW with no decay and no gradient leaves parameters alone") {
  std::vector<double> p{0.25, -4.0}, g{0.0, 0.0};
  AdamW opt(1e-2, 0.0);
  for (int i = 0; i < 5; ++i) opt.step({p}, {g});
  CHECK(p[0] == 0.25);
  CHECK(p[1] == -4.0);
}

TEST_CASE("AdamW matches a hand-rolled trajectory") {
  const double lr = 0.05, wd = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  std::vector<double> p{1.0, -0.5}, grads[3] = {{0.2, -0.1}, {-0.4, 0.3}, {0.05, 0.05}};
  AdamW opt(lr, wd);
  double q[2] = {1.0, -0.5}, m[2] = {0, 0}, v[2] = {0, 0};
  for (int t = 1; t <= 3; ++t) {
    std::vector<double> g = grads[t - 1];
    opt.step({p}, {g});
    for (int i = 0; i < 2; ++i) {
      q[i] -= lr * wd * q[i];
      m[i] = b1 * m[i] + (1 - b1) * g[i];
      v[i] = b2 * v[i] + (1 - b2) * g[i] * g[i];
      const double mh = m[i] / (1 - std::pow(b1, t));
      const double vh = v[i] / (1 - std::pow(b2, t));
      q[i] -= lr * mh / (std::sqrt(vh) + eps);
    }
    CHECK(p[0] == doctest::Approx(q[0]).epsilon(1e-13));
    CHECK(p[1] == doctest::Approx(q[1]).epsilon(1e-13));
  }
}

TEST_CASE("AdamW rejects non-finite gradients without touching parameters") {
  std::vector<double> p{1.0, 2.0}, g{0.1, std::numeric_limits<double>::quiet_NaN()};
  AdamW opt(1e-3, 0.01);
  CHECK_THROWS_KIND(opt.step({p}, {g}), ErrorKind::numeric);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 2.0);
  std::vector<double> short_g{0.1};
  CHECK_THROWS_KIND(opt.step({p}, {short_g}), ErrorKind::dimension);
  CHECK_THROWS_KIND(AdamW(-1.0, 0.0), ErrorKind::config);
}

TEST_CASE("gradient clipping examples") {
  std::vector<double> a{0.3, 0.4};
  CHECK(clip_grad_norm({a}, 1.0) == doctest::Approx(0.5));
  CHECK(a == std::vector<double>{0.3, 0.4});

  std::vector<double> b{1.2}, c{1.6};
  CHECK(clip_grad_norm({b, c}, 1.0) == doctest::Approx(2.0));
  CHECK(b[0] == doctest::Approx(0.6));
  CHECK(c[0] == doctest::Approx(0.8));
  CHECK(global_norm({b, c}) == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<double> z{0.0, 0.0};
  CHECK(clip_grad_norm({z}, 1.0) == 0.0);
  CHECK(z == std::vector<double>{0.0, 0.0});
}

TEST_CASE("clipping never increases the norm") {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> a(1 + rng.uniform_index(20)), b(1 + rng.uniform_index(20));
    const double scale = std::pow(10.0, 4.0 * rng.uniform() - 2.0);
    for (double& x : a) x = scale * rng.normal();
    for (double& x : b) x = scale * rng.normal();
    const double max_norm = 0.1 + 2.0 * rng.uniform();
    const double before = global_norm({a, b});
    clip_grad_norm({a, b}, max_norm);
    const double after = global_norm({a, b});
    CHECK(after <= before + 1e-12);
    CHECK(after <= max_norm + 1e-12);
  }
}

TEST_CASE("plateau scheduler") {
  PlateauScheduler s{10, 0.5, 1e-7};
  double lr = 1e-3;
  for (int e = 0; e < 50; ++e) lr = s.step(10.0 - e, lr);
  CHECK(lr == 1e-3);

  PlateauScheduler t{10, 0.5, 1e-7};
  lr = 1e-3;
  lr = t.step(1.0, lr);  // best
  for (int e = 1; e <= 10; ++e) {
    lr = t.step(1.0, lr);
    CHECK(lr == 1e-3);
  }
  lr = t.step(1.0, lr);  // eleventh flat epoch
  CHECK(lr == 5e-4);

  PlateauScheduler u{0, 0.5, 1e-7};
  lr = 1e-7;
  u.step(1.0, lr);
  for (int e = 0; e < 5; ++e) lr = u.step(2.0, lr);
  CHECK(lr == 1e-7);
  CHECK_THROWS_KIND(u.step(std::numeric_limits<double>::infinity(), lr), ErrorKind::numeric);
}

TEST_CASE("early stopping") {
  EarlyStopping a{15};
  for (int e = 1; e <= 200; ++e) CHECK_FALSE(a.step(1000.0 - e, e));

  EarlyStopping b{15};
  const double losses[] = {3.0, 2.0, 1.0};
  int stopped = -1;
  for (int e = 1; e <= 100 && stopped < 0; ++e)
    if (b.step(e <= 3 ? losses[e - 1] : 1.0, e)) stopped = e;
  CHECK(stopped == 18);
  CHECK(b.best_epoch == 3);

  EarlyStopping c{10};
  c.step(0.5, 1);
  int flat = 0;
  while (!c.step(0.5, 2 + flat)) ++flat;
  CHECK(flat + 1 == 10);
}
