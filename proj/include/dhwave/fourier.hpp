#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>

namespace dhwave {

struct Frequency {
  double xi1 = 0.0;
  double xi2 = 0.0;
};

// Fourier-Laplace dual of time; only the lower half-plane Im < 0 is valid.
struct LaplaceFrequency {
  double re = 0.0;
  double im = -1.0;
};

// h-tilde shorthand: 2 tau sqrt(lambda(1-lambda)) *
// sqrt((4 tau^2 lambda^2 + 6 tau x1 lambda + 3 x1^2)/3).
double h_tilde(double tau, double x1, double lambda);

// max over lambda in [0,1] of h_tilde (used to size oscillation panels).
double h_tilde_max(double tau, double x1);

// Spatial Fourier transform of the kernel in the source variables:
//   tau * e^{-i x2 xi2 - i x1 xi1} *
//     Int_0^1 e^{-2 i lambda tau xi1} J0(xi2 * h_tilde(tau,x1,lambda)) dlambda.
// Oscillation-aware adaptive quadrature with absolute error <= tol.
std::complex<double> fourier_gamma(double tau, double x1, double x2,
                                   Frequency xi, double tol = 1e-9,
                                   std::size_t max_evals = 40'000'000);

// Independent oracle path: the (y1, theta) double integral prior to the
// Bessel identity.  No J0 calls anywhere on this path.
std::complex<double> fourier_gamma_direct(double tau, double x1, double x2,
                                          Frequency xi, double tol = 1e-8,
                                          std::size_t max_evals = 40'000'000);

// Frozen envelope constants for the decay bounds, calibrated once by
// sweeping |fourier_gamma| over tau in (0,2], |x1| <= 2, |xi| <= 1e4 and
// fitting the smallest constants, then scaled by a 1.1 safety factor.
struct BoundConstants {
  double c_beta;            // |F| <= c_beta / sqrt(|xi2|)
  double c4;                // |F| <= c4/|xi1| + K(tau,x1) |xi2|/|xi1|
  double k_a, k_b;          // K(tau,x1) = k_a * tau + k_b * |x1|
  double kt_a, kt_b, kt_c;  // kappa_tilde(tau,x1) = (kt_a tau + kt_b |x1| + kt_c)^2
  std::uint64_t grid_hash;  // digest of the calibration grid

  static const BoundConstants& frozen();
};

double kappa_tilde(double tau, double x1, const BoundConstants& c = BoundConstants::frozen());

double bound_xi2(double tau, double x1, Frequency xi,
                 const BoundConstants& c = BoundConstants::frozen());
double bound_xi1(double tau, double x1, Frequency xi,
                 const BoundConstants& c = BoundConstants::frozen());
// sqrt(kappa_tilde) / sqrt(1+|xi|^{2/3}); dominates |fourier_gamma| and is
// the square root of the global quadratic envelope.
double bound_global(double tau, double x1, Frequency xi,
                    const BoundConstants& c = BoundConstants::frozen());

// Re-run the calibration sweep (slow; the frozen constants in
// data/bound_constants.txt were produced by this).
BoundConstants calibrate_bounds();

void save_bound_constants(std::ostream& os, const BoundConstants& c);
BoundConstants load_bound_constants(std::istream& is);
BoundConstants load_bound_constants_file(const std::string& path);

// Fourier-Laplace transform of the kernel in (t, x2):
//   -(i/(2 xi0)) e^{ i (xi0/2)(x1-y1) - i (xi2^2/(6 xi0))(x1^3-y1^3) } H(y1-x1).
std::complex<double> hat_gamma_dagger(LaplaceFrequency xi0, double x1,
                                      double y1, double xi2);

// Left side: quadrature of Int_0^inf e^{-i xi0 t} (pi t)^{-1/2} dt with the
// endpoint absorbed by t = s^2.  Right side: principal branch (i xi0)^{-1/2}.
std::pair<std::complex<double>, std::complex<double>> laplace_chi_identity(
    LaplaceFrequency xi0, double tol = 1e-10);

// Least-squares log-log slope of |fourier_gamma| sampled along a ray;
// points are n log-spaced magnitudes in [lo, hi], with frequency
// (dir1, dir2) scaled by (g, g^{pow2}) at magnitude g.
double decay_slope(double tau, double x1, double lo, double hi, int n,
                   bool along_xi2_axis);

}  // namespace dhwave
