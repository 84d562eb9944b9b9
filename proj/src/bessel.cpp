#include "dhwave/bessel.hpp"

#include <array>
#include <cmath>
#include <complex>

#include "dhwave/quadrature.hpp"

namespace dhwave {
namespace {

constexpr double kSeriesCutoff = 12.0;

// Series accumulation in long double: the alternating terms reach ~4e3 at
// z = 12 while the sum is O(1e-2), so double accumulation would lose too
// many digits near the switchover.
double j0_series(double z) {
  const long double q = -0.25L * static_cast<long double>(z) * z;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 80; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::abs(static_cast<double>(term)) < 1e-20 * (1.0 + std::abs(static_cast<double>(sum))))
      break;
  }
  return static_cast<double>(sum);
}

double j1_series(double z) {
  const long double q = -0.25L * static_cast<long double>(z) * z;
  long double term = 0.5L * z, sum = term;
  for (int k = 1; k < 80; ++k) {
    term *= q / (static_cast<long double>(k) * (k + 1));
    sum += term;
    if (std::abs(static_cast<double>(term)) < 1e-20 * (1.0 + std::abs(static_cast<double>(sum))))
      break;
  }
  return static_cast<double>(sum);
}

// Modulus functions for the large-argument representation.  With
// omega = z - nu pi/2 - pi/4,
//   J_nu(z) = sqrt(2/(pi z)) * Re[ e^{i omega} * I_nu(z) ],
//   I_nu(z) = 1/Gamma(nu+1/2) * Int_0^inf e^{-u} u^{nu-1/2} (1+iu/(2z))^{nu-1/2} du,
// evaluated after u = v^2 with a fixed 48-node Gauss-Legendre rule on
// [0, 7.5] (the integrand is e^{-v^2} times an analytic factor).  The pair
// (Re I, Im I) plays the role of the classical (P, -Q) amplitude functions.
template <int Nu>
std::complex<double> modulus_integral(double z) {
  static_assert(Nu == 0 || Nu == 1);
  const double gamma_nu_half = (Nu == 0) ? std::sqrt(M_PI) : 0.5 * std::sqrt(M_PI);
  auto f = [&](double v) -> std::complex<double> {
    const double u = v * v;
    const std::complex<double> base(1.0, u / (2.0 * z));
    std::complex<double> fac;
    if constexpr (Nu == 0) {
      fac = 1.0 / std::sqrt(base);
    } else {
      fac = u * std::sqrt(base);
    }
    return 2.0 * std::exp(-u) * fac;
  };
  return integrate_gl(f, 0.0, 7.5, 48) / gamma_nu_half;
}

// Chebyshev interpolants of the modulus integral in w = cutoff/z on (0,1],
// built once; keeps the large-argument branch cheap in inner loops.
struct ChebPair {
  static constexpr int kDeg = 28;
  std::array<double, kDeg + 1> re{}, im{};

  template <int Nu>
  static ChebPair build() {
    ChebPair c;
    std::array<std::complex<double>, kDeg + 1> fvals;
    for (int k = 0; k <= kDeg; ++k) {
      // Chebyshev nodes mapped to w in [0, 1]; w=0 handled by the
      // asymptote (1+0i) of the integrand factor.
      const double t = std::cos(M_PI * (k + 0.5) / (kDeg + 1));
      const double w = 0.5 * (t + 1.0);
      const double z = (w > 1e-12) ? kSeriesCutoff / w : 1e14;
      fvals[k] = modulus_integral<Nu>(z);
    }
    for (int j = 0; j <= kDeg; ++j) {
      double sre = 0, sim = 0;
      for (int k = 0; k <= kDeg; ++k) {
        const double ang = M_PI * j * (k + 0.5) / (kDeg + 1);
        sre += fvals[k].real() * std::cos(ang);
        sim += fvals[k].imag() * std::cos(ang);
      }
      c.re[j] = 2.0 / (kDeg + 1) * sre;
      c.im[j] = 2.0 / (kDeg + 1) * sim;
    }
    c.re[0] *= 0.5;
    c.im[0] *= 0.5;
    return c;
  }

  std::complex<double> eval(double w) const {
    const double t = 2.0 * w - 1.0;
    double b1r = 0, b2r = 0, b1i = 0, b2i = 0;
    for (int j = kDeg; j >= 1; --j) {
      const double br = 2 * t * b1r - b2r + re[j];
      const double bi = 2 * t * b1i - b2i + im[j];
      b2r = b1r;
      b1r = br;
      b2i = b1i;
      b1i = bi;
    }
    return {t * b1r - b2r + re[0], t * b1i - b2i + im[0]};
  }
};

template <int Nu>
double j_large(double z) {
  static const ChebPair cheb = ChebPair::build<Nu>();
  const std::complex<double> amp = cheb.eval(kSeriesCutoff / z);
  const double omega = z - Nu * M_PI_2 - M_PI_4;
  return std::sqrt(2.0 / (M_PI * z)) *
         (std::cos(omega) * amp.real() - std::sin(omega) * amp.imag());
}

}  // namespace

double bessel_j0(double z) {
  z = std::abs(z);  // J0 is even
  if (z <= kSeriesCutoff) return j0_series(z);
  return j_large<0>(z);
}

double bessel_j1(double z) {
  const double s = (z < 0) ? -1.0 : 1.0;  // J1 is odd
  z = std::abs(z);
  if (z <= kSeriesCutoff) return s * j1_series(z);
  return s * j_large<1>(z);
}

}  // namespace dhwave
