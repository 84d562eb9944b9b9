#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "dhwave/errors.hpp"
#include "dhwave/quadrature.hpp"

using namespace dhwave;

TEST_CASE("adaptive integrator reproduces elementary integrals") {
  auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                              std::numbers::pi, 1e-12);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

  r = integrate_adaptive([](double x) { return std::exp(-x * x); }, -8.0, 8.0,
                         1e-12);
  CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("adaptive integrator handles integrable endpoint singularities") {
  auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); },
                              0.0, 1.0, 1e-9, 200000);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("adaptive integrator resolves oscillation when given panels") {
  double omega = 200.0;
  auto r = integrate_adaptive([&](double x) { return std::cos(omega * x); },
                              0.0, 1.0, 1e-10, 400000, 64);
  CHECK(r.value == doctest::Approx(std::sin(omega) / omega).epsilon(1e-8));
}

TEST_CASE("adaptive integrator reports non-convergence") {
  // Endpoint singularity with an evaluation budget far too small for the
  // requested tolerance.
  auto f = [](double x) { return 1.0 / std::sqrt(x + 1e-300); };
  CHECK_THROWS_AS(integrate_adaptive(f, 0.0, 1.0, 1e-14, 300),
                  QuadratureNoConvergence);
}

TEST_CASE("complex-valued integration") {
  using namespace std::complex_literals;
  auto r = integrate_adaptive(
      [](double x) { return std::exp(1i * x); }, 0.0, 1.0, 1e-12);
  CHECK(std::abs(r.value - (std::sin(1.0) + 1i * (1.0 - std::cos(1.0)))) <
        1e-11);
}

TEST_CASE("fixed Gauss-Legendre rule is exact on polynomials") {
  // degree 2n-1 exactness
  auto f = [](double x) { return 5 * x * x * x * x - x * x + 3; };
  double exact = 5.0 / 5 * 2 - 2.0 / 3 + 6;
  CHECK(integrate_gl(f, -1.0, 1.0, 3) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("gauss_legendre nodes are symmetric and weights sum to 2") {
  auto [x, w] = gauss_legendre(16);
  double sw = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    CHECK(x[i] == doctest::Approx(-x[x.size() - 1 - i]).epsilon(1e-14));
  }
  CHECK(sw == doctest::Approx(2.0).epsilon(1e-14));
}
