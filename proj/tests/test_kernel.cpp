#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dhwave/kernel.hpp"
#include "dhwave/quadrature.hpp"

using namespace dhwave;

TEST_CASE("closed-form value on the support") {
  // radicand (1-0)(2+0-1) - 0 = 1
  KernelPoint p{1.0, 0.0, 1.0, 0.0};
  CHECK(support_radicand(p) == doctest::Approx(1.0));
  CHECK(in_support(p));
  CHECK(gamma_eval(p) ==
        doctest::Approx(std::sqrt(3.0) / (2.0 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("zero off the support and on its boundary") {
  CHECK(gamma_eval({-1.0, 0.0, 1.0, 0.0}) == 0.0);   // t <= 0
  CHECK(gamma_eval({1.0, 0.5, 0.2, 0.0}) == 0.0);    // y1 <= x1
  CHECK(gamma_eval({1.0, 0.0, 3.0, 0.0}) == 0.0);    // y1 beyond x1 + 2t
  CHECK(gamma_eval({1.0, 0.0, 1.0, 5.0}) == 0.0);    // |x2| too large
  // exact boundary: radicand == 0 maps to 0, never to infinity
  KernelPoint b{1.0, 0.0, 1.0, std::sqrt(1.0 / 3.0)};
  CHECK(support_radicand(b) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::isfinite(gamma_eval(b)));
}

TEST_CASE("positivity on random support points") {
  for (double t : {0.3, 1.0, 2.5})
    for (double x1 : {-1.0, 0.0, 0.7}) {
      double y1 = x1 + 0.8 * 2 * t;
      double rad = support_radicand({t, x1, y1, 0.0});
      REQUIRE(rad > 0.0);
      double x2 = 0.5 * std::sqrt(rad / 3.0);
      CHECK(gamma_eval({t, x1, y1, x2}) > 0.0);
    }
}

TEST_CASE("mass in y2 per source slice is 1/2, total mass is t") {
  double t = 0.8, x1 = -0.3, x2 = 0.1;
  // Int Gamma(t, x1, y1, x2 - y2) dy2 = 1/2 on x1 < y1 < x1 + 2t
  auto slice = [&](double y1) {
    double rad0 = (y1 * y1 * y1 - x1 * x1 * x1) * (2 * t + x1 - y1);
    double s = std::sqrt(std::max(rad0 / 3.0, 0.0));
    if (s <= 0) return 0.0;
    return integrate_adaptive(
               [&](double y2) { return gamma_eval({t, x1, y1, x2 - y2}); },
               x2 - s * (1 - 1e-12), x2 + s * (1 - 1e-12), 1e-9, 200000)
        .value;
  };
  CHECK(slice(x1 + 0.7 * 2 * t) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(slice(x1 + 0.2 * 2 * t) == doctest::Approx(0.5).epsilon(1e-6));
  double mass = integrate_adaptive(slice, x1 + 1e-10, x1 + 2 * t - 1e-10,
                                   1e-7, 400000)
                    .value;
  CHECK(mass == doctest::Approx(t).epsilon(1e-5));
}

TEST_CASE("bump axis derivatives match finite differences") {
  BumpAxis b{0.3, 0.7};
  double h = 1e-6;
  for (double s : {0.0, 0.3, 0.65, 0.9}) {
    double fd1 = (b.value(s + h) - b.value(s - h)) / (2 * h);
    double fd2 = (b.value(s + h) - 2 * b.value(s) + b.value(s - h)) / (h * h);
    CHECK(b.d1(s) == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(b.d2(s) == doctest::Approx(fd2).epsilon(2e-4));
  }
  CHECK(b.value(1.1) == 0.0);
  CHECK(b.d1(-0.5) == 0.0);
  CHECK(b.d2(1.0) == 0.0);
}

TEST_CASE("second-order operator application matches finite differences") {
  TestFunction phi{{0.4, 0.35}, {0.1, 0.6}, {0.0, 0.5}, 2.0};
  double h = 1e-5;
  for (auto [t, x1, x2] : {std::tuple{0.4, 0.1, 0.0}, {0.3, -0.2, 0.2},
                           {0.55, 0.4, -0.25}}) {
    double dtt = (phi.value(t + h, x1, x2) - 2 * phi.value(t, x1, x2) +
                  phi.value(t - h, x1, x2)) /
                 (h * h);
    double dtx1 = (phi.value(t + h, x1 + h, x2) - phi.value(t + h, x1 - h, x2) -
                   phi.value(t - h, x1 + h, x2) + phi.value(t - h, x1 - h, x2)) /
                  (4 * h * h);
    double dx2x2 = (phi.value(t, x1, x2 + h) - 2 * phi.value(t, x1, x2) +
                    phi.value(t, x1, x2 - h)) /
                   (h * h);
    double want = dtt - 2 * dtx1 - x1 * x1 * dx2x2;
    CHECK(lop_apply(phi, t, x1, x2) == doctest::Approx(want).epsilon(5e-4));
  }
  CHECK(lop_apply(phi, 0.9, 0.1, 0.0) == 0.0);  // outside supp
}

TEST_CASE("kernel is a weak fundamental solution") {
  double y1 = 0.4;
  // Bump straddling (t, x1, x2) = (0, y1, 0): pairing returns phi there.
  TestFunction phi{{0.1, 0.35}, {y1 + 0.05, 0.5}, {0.02, 0.45}, 1.3};
  double want = phi.value(0.0, y1, 0.0);
  REQUIRE(want > 0.0);
  double got = weak_apply(y1, phi, 1e-4);
  CHECK(got == doctest::Approx(want).epsilon(5e-3));
}

TEST_CASE("weak pairing vanishes for bumps missing the source point") {
  double y1 = -0.5;
  // Time support strictly positive: phi(0, ., .) == 0.
  TestFunction late{{0.8, 0.3}, {y1, 0.5}, {0.0, 0.4}, 1.0};
  CHECK(std::abs(weak_apply(y1, late, 1e-4)) < 5e-4);
  // Spatial support away from y1 at t = 0.
  TestFunction off{{0.05, 0.2}, {y1 + 1.5, 0.4}, {0.0, 0.4}, 1.0};
  CHECK(std::abs(weak_apply(y1, off, 1e-4)) < 5e-4);
}
