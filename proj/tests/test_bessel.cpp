#include <cmath>

#include "doctest.h"
#include "dhwave/bessel.hpp"
#include "dhwave/quadrature.hpp"

using namespace dhwave;

namespace {

// Independent oracle: J0(z) = (1/pi) Int_0^pi cos(z sin(theta)) dtheta.
double j0_reference(double z) {
  constexpr double pi = 3.14159265358979323846;
  int panels = 8 + static_cast<int>(std::abs(z));
  return integrate_adaptive(
             [&](double th) { return std::cos(z * std::sin(th)); }, 0.0, pi,
             1e-13, 500000, panels)
             .value /
         pi;
}

}  // namespace

TEST_CASE("J0 at zero and small arguments") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(bessel_j1(0.0) == 0.0);
  CHECK(bessel_j0(0.5) == doctest::Approx(0.938469807240813).epsilon(1e-13));
  CHECK(bessel_j1(0.5) == doctest::Approx(0.24226845767487387).epsilon(1e-13));
  CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976865579665).epsilon(1e-13));
  CHECK(bessel_j1(1.0) == doctest::Approx(0.44005058574493355).epsilon(1e-13));
}

TEST_CASE("J0 first zero") {
  CHECK(std::abs(bessel_j0(2.4048255576957728)) < 1e-13);
}

TEST_CASE("series/asymptotic crossover region and large arguments") {
  for (double z : {5.0, 11.9, 12.1, 30.0, 100.0, 1000.0}) {
    CAPTURE(z);
    CHECK(bessel_j0(z) == doctest::Approx(j0_reference(z)).epsilon(5e-12));
  }
  CHECK(bessel_j0(11.9) == doctest::Approx(0.02504944169958986).epsilon(1e-11));
  CHECK(bessel_j0(12.1) == doctest::Approx(0.06966677360680752).epsilon(1e-11));
  CHECK(bessel_j0(100.0) == doctest::Approx(0.01998585030422333).epsilon(1e-11));
  CHECK(bessel_j1(30.0) == doctest::Approx(-0.11875106261662305).epsilon(1e-11));
  CHECK(bessel_j1(1000.0) == doctest::Approx(0.00472831190708902).epsilon(1e-10));
}

TEST_CASE("evenness of J0, oddness of J1") {
  for (double z : {0.3, 7.7, 42.0}) {
    CHECK(bessel_j0(-z) == bessel_j0(z));
    CHECK(bessel_j1(-z) == -bessel_j1(z));
  }
}

TEST_CASE("derivative relation J0' = -J1") {
  double h = 1e-6;
  for (double z : {0.8, 6.0, 25.0}) {
    double fd = (bessel_j0(z + h) - bessel_j0(z - h)) / (2 * h);
    CHECK(fd == doctest::Approx(-bessel_j1(z)).epsilon(1e-7));
  }
}

TEST_CASE("envelope decay ~ z^{-1/2}") {
  // |J0| is bounded by sqrt(2/(pi z)) for large z.
  for (double z : {50.0, 500.0, 5000.0}) {
    CHECK(std::abs(bessel_j0(z)) <= std::sqrt(2.0 / (3.14159 * z)) * 1.001);
  }
}
