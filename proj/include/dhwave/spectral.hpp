#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "dhwave/fourier.hpp"

namespace dhwave {

// Parametric spectral measures.  All densities are radial.
struct RieszPower {
  double beta;  // density |xi|^{beta-2}, beta in (0,2), unit constant
};
struct GaussianDensity {
  double ell;  // density e^{-ell^2 |xi|^2}
};
struct WhiteNoise {};  // density == 1
struct TabulatedRadial {
  // (radius, density) pairs, radii strictly increasing, density >= 0.
  // Linear interpolation between samples, zero outside [r_front, r_back].
  std::vector<std::pair<double, double>> samples;
};

using SpectralMeasureSpec =
    std::variant<RieszPower, GaussianDensity, WhiteNoise, TabulatedRadial>;

// Throws DomainError when the spec violates its invariants.
void validate(const SpectralMeasureSpec& mu);

double radial_density(const SpectralMeasureSpec& mu, double r);

// True for measures with a density usable in spectral synthesis
// (everything except WhiteNoise).
bool admits_synthesis(const SpectralMeasureSpec& mu);

enum class IntegralMethod { ClosedForm, Quadrature };

struct IntegralVerdict {
  bool divergent = false;
  double value = 0.0;  // meaningless when divergent
  IntegralMethod method = IntegralMethod::Quadrature;
  double error_estimate = 0.0;
};

enum class AdmissibilityWeight {
  Degenerate,  // 1/(1+|xi|^{2/3})  — the operator's condition
  Wave,        // 1/(1+|xi|^2)      — the classical wave-equation condition
};

// Int_{R^2} weight(|xi|) dmu.  Closed-form classification for RieszPower
// and WhiteNoise; annulus quadrature with tail estimate otherwise.
IntegralVerdict sc_integral(const SpectralMeasureSpec& mu);
IntegralVerdict dalang_integral(const SpectralMeasureSpec& mu);

// Pure quadrature route (dyadic annuli, divergence declared when the last
// five annulus contributions are non-decreasing above a floor).  Used as
// an independent check against the closed-form classifications.
IntegralVerdict classify_quadrature(const SpectralMeasureSpec& mu,
                                    AdmissibilityWeight w);

// Int_0^t Int_{R^2} f(tau, xi) dmu(xi) dtau for weights f that are even in
// each frequency component (all kernel-transform based integrands are).
// Polar quadrature with a fitted power-law tail beyond r_cut.
double time_spectral_integral(double t,
                              const SpectralMeasureSpec& mu,
                              const std::function<double(double, Frequency)>& f,
                              double tol, double r_cut = 800.0);

// Int_0^t Int_{R^2} |F Gamma(t-s, x1, ., x2-.)(xi)|^2 dmu(xi) ds.
double norm_integral(double t, double x1, double x2,
                     const SpectralMeasureSpec& mu, double tol,
                     double r_cut = 800.0);

}  // namespace dhwave
