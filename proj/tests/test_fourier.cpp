#include <cmath>
#include <complex>

#include "doctest.h"
#include "dhwave/errors.hpp"
#include "dhwave/fourier.hpp"

using namespace dhwave;
using namespace std::complex_literals;

TEST_CASE("h_tilde squares to the radicand core") {
  for (double tau : {0.4, 1.0, 1.7})
    for (double x1 : {-0.8, 0.0, 0.6})
      for (double lam : {0.1, 0.5, 0.93}) {
        double y1 = x1 + 2.0 * lam * tau;
        double h = (2.0 * tau + x1 - y1) * (y1 * y1 * y1 - x1 * x1 * x1) / 3.0;
        double ht = h_tilde(tau, x1, lam);
        CHECK(ht * ht == doctest::Approx(h).epsilon(1e-12));
      }
  CHECK_THROWS_AS(h_tilde(1.0, 0.0, -0.1), DomainError);
  CHECK_THROWS_AS(h_tilde(1.0, 0.0, 1.1), DomainError);
  CHECK_THROWS_AS(h_tilde(-1.0, 0.0, 0.5), DomainError);
}

TEST_CASE("transform equals the direct double-integral oracle") {
  int idx = 0;
  for (double tau : {0.35, 1.2})
    for (double x1 : {-0.6, 0.4})
      for (double x2 : {0.0, 0.8}) {
        Frequency xi{(idx % 3 - 1) * 7.3, 2.0 + 5.0 * (idx % 4)};
        ++idx;
        auto a = fourier_gamma(tau, x1, x2, xi, 1e-9);
        auto b = fourier_gamma_direct(tau, x1, x2, xi, 1e-8);
        CAPTURE(tau);
        CAPTURE(x1);
        CAPTURE(x2);
        CHECK(std::abs(a - b) < 1e-6);
      }
}

TEST_CASE("value at zero frequency is tau") {
  for (double tau : {0.2, 1.0, 2.3}) {
    auto v = fourier_gamma(tau, 0.3, -0.5, {0.0, 0.0});
    CHECK(v.real() == doctest::Approx(tau).epsilon(1e-9));
    CHECK(std::abs(v.imag()) < 1e-9);
  }
}

TEST_CASE("modulus never exceeds tau") {
  int n = 0;
  for (double tau : {0.3, 1.0, 2.0})
    for (double r : {0.5, 5.0, 60.0, 900.0})
      for (double ang : {0.1, 0.9, 1.5}) {
        Frequency xi{r * std::cos(ang), r * std::sin(ang)};
        CHECK(std::abs(fourier_gamma(tau, 0.4, 0.0, xi, 1e-8)) <=
              tau * (1 + 1e-7) + 1e-8);
        ++n;
      }
  CHECK(n == 36);
}

TEST_CASE("modulus is independent of x2") {
  Frequency xi{3.0, 11.0};
  double m0 = std::abs(fourier_gamma(0.9, -0.2, 0.0, xi, 1e-10));
  for (double x2 : {0.33, -1.7, 4.0})
    CHECK(std::abs(fourier_gamma(0.9, -0.2, x2, xi, 1e-10)) ==
          doctest::Approx(m0).epsilon(1e-8));
}

TEST_CASE("calibrated envelopes dominate the modulus") {
  const auto& c = BoundConstants::frozen();
  for (double tau : {0.3, 0.9, 1.8})
    for (double x1 : {-1.2, 0.0, 1.5})
      for (double r : {2.0, 25.0, 300.0, 4000.0})
        for (double ang : {0.2, 0.8, 1.4}) {
          Frequency xi{r * std::cos(ang), r * std::sin(ang)};
          double m = std::abs(fourier_gamma(tau, x1, 0.0, xi, 1e-8));
          CAPTURE(tau);
          CAPTURE(x1);
          CAPTURE(r);
          CAPTURE(ang);
          CHECK(m <= bound_xi2(tau, x1, xi, c) * (1 + 1e-6));
          CHECK(m <= bound_global(tau, x1, xi, c) * (1 + 1e-6));
          // dominance form: (1 + |xi|^{2/3}) |F|^2 <= kappa_tilde
          double xin = std::hypot(xi.xi1, xi.xi2);
          CHECK((1 + std::cbrt(xin * xin)) * m * m <=
                kappa_tilde(tau, x1, c) * (1 + 1e-6));
        }
}

TEST_CASE("transform decays along the xi2 axis") {
  double s = decay_slope(1.0, 0.5, 1e2, 1e4, 9, true);
  CHECK(s < -0.4);  // strictly decaying, faster than the envelope rate
}

TEST_CASE("Laplace-side closed form") {
  LaplaceFrequency xi0{0.7, -0.4};
  std::complex<double> z0{xi0.re, xi0.im};

  SUBCASE("vanishes ahead of the source") {
    CHECK(hat_gamma_dagger(xi0, 0.5, 0.2, 3.0) == 0.0 + 0.0i);
  }
  SUBCASE("left limit equals -i/(2 xi0)") {
    auto v = hat_gamma_dagger(xi0, 0.5, 0.5 + 1e-13, 3.0);
    CHECK(std::abs(v - (-1i / (2.0 * z0))) < 1e-10);
  }
  SUBCASE("satisfies the first-order equation in x1") {
    for (double x1 : {-0.4, 0.3}) {
      double y1 = 0.9, xi2 = 2.0;
      double h = 1e-6;
      auto d = (hat_gamma_dagger(xi0, x1 + h, y1, xi2) -
                hat_gamma_dagger(xi0, x1 - h, y1, xi2)) /
               (2 * h);
      auto res = d + 1i / (2.0 * z0) *
                         (x1 * x1 * xi2 * xi2 - z0 * z0) *
                         hat_gamma_dagger(xi0, x1, y1, xi2);
      CHECK(std::abs(res) /
                std::abs(hat_gamma_dagger(xi0, x1, y1, xi2)) < 1e-6);
    }
  }
}

TEST_CASE("half-integral Laplace identity") {
  for (auto [re, im] : {std::pair{0.5, -0.3}, {2.0, -1.0}, {-1.2, -0.05}}) {
    auto [numeric, closed] = laplace_chi_identity({re, im}, 1e-12);
    CAPTURE(re);
    CAPTURE(im);
    CHECK(std::abs(numeric - closed) < 1e-8);
  }
  CHECK_THROWS_AS(laplace_chi_identity({1.0, 0.1}), DomainError);
}

TEST_CASE("constants round-trip through the text format") {
  std::stringstream ss;
  save_bound_constants(ss, BoundConstants::frozen());
  auto c = load_bound_constants(ss);
  CHECK(c.c_beta == BoundConstants::frozen().c_beta);
  CHECK(c.kt_c == BoundConstants::frozen().kt_c);
  CHECK(c.grid_hash == BoundConstants::frozen().grid_hash);
}
