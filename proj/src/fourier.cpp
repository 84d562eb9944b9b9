#include "dhwave/fourier.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "dhwave/bessel.hpp"
#include "dhwave/errors.hpp"
#include "dhwave/hash.hpp"
#include "dhwave/quadrature.hpp"

namespace dhwave {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

std::size_t oscillation_panels(double total_phase) {
  const double p = std::abs(total_phase) / M_PI;
  return static_cast<std::size_t>(std::min(p, 4.0e6)) + 1;
}
}  // namespace

double h_tilde(double tau, double x1, double lambda) {
  if (!(tau > 0.0)) throw DomainError("h_tilde: tau must be positive");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw DomainError("h_tilde: lambda must lie in [0,1]");
  const double poly =
      (4.0 * tau * tau * lambda * lambda + 6.0 * tau * x1 * lambda +
       3.0 * x1 * x1) /
      3.0;
  return 2.0 * tau * std::sqrt(lambda * (1.0 - lambda)) * std::sqrt(poly);
}

double h_tilde_max(double tau, double x1) {
  // h_tilde^2 is a quartic in lambda; a dense scan is cheap and robust.
  double best = 0.0;
  for (int i = 0; i <= 512; ++i) {
    best = std::max(best, h_tilde(tau, x1, i / 512.0));
  }
  return best;
}

std::complex<double> fourier_gamma(double tau, double x1, double x2,
                                   Frequency xi, double tol,
                                   std::size_t max_evals) {
  if (!(tau > 0.0)) throw DomainError("fourier_gamma: tau must be positive");
  const double hmax = h_tilde_max(tau, x1);
  const std::size_t panels =
      oscillation_panels(2.0 * tau * std::abs(xi.xi1) +
                         std::abs(xi.xi2) * hmax);
  auto f = [&](double lam) -> std::complex<double> {
    const double phase = -2.0 * lam * tau * xi.xi1;
    return std::complex<double>(std::cos(phase), std::sin(phase)) *
           bessel_j0(xi.xi2 * h_tilde(tau, x1, lam));
  };
  const auto integral =
      integrate_adaptive(f, 0.0, 1.0, tol / tau, max_evals, panels);
  const double pre_phase = -(x2 * xi.xi2 + x1 * xi.xi1);
  const std::complex<double> result =
      tau * std::complex<double>(std::cos(pre_phase), std::sin(pre_phase)) *
      integral.value;
#ifndef NDEBUG
  // |integrand| <= 1, so the modulus can never exceed tau.
  assert(std::abs(result) <= tau * (1.0 + 1e-9) + tol);
#endif
  return result;
}

std::complex<double> fourier_gamma_direct(double tau, double x1, double x2,
                                          Frequency xi, double tol,
                                          std::size_t max_evals) {
  if (!(tau > 0.0))
    throw DomainError("fourier_gamma_direct: tau must be positive");
  const double y_hi = x1 + 2.0 * tau;
  const double hmax2 = h_tilde_max(tau, x1);
  const double inner_tol = std::max(tol * M_PI / (2.0 * tau) * 0.25, 1e-13);

  auto h_of = [&](double y1) {
    return (2.0 * tau + x1 - y1) *
           (y1 * y1 * y1 - x1 * x1 * x1) / 3.0;
  };
  auto inner = [&](double y1) -> std::complex<double> {
    const double sh = std::sqrt(std::max(0.0, h_of(y1)));
    const std::size_t panels = oscillation_panels(std::abs(xi.xi2) * sh);
    auto g = [&](double theta) -> std::complex<double> {
      const double phase = -sh * std::sin(theta) * xi.xi2;
      return {std::cos(phase), std::sin(phase)};
    };
    return integrate_adaptive(g, -M_PI_2, M_PI_2, inner_tol, max_evals, panels)
        .value;
  };
  auto f = [&](double y1) -> std::complex<double> {
    const double phase = -y1 * xi.xi1;
    return std::complex<double>(std::cos(phase), std::sin(phase)) * inner(y1);
  };
  const std::size_t panels = oscillation_panels(
      2.0 * tau * std::abs(xi.xi1) + std::abs(xi.xi2) * hmax2);
  const auto outer = integrate_adaptive(f, x1, y_hi, 2.0 * M_PI * tol * 0.5,
                                        max_evals, panels);
  const double pre_phase = -x2 * xi.xi2;
  return std::complex<double>(std::cos(pre_phase), std::sin(pre_phase)) /
         (2.0 * M_PI) * outer.value;
}

double kappa_tilde(double tau, double x1, const BoundConstants& c) {
  const double lin = c.kt_a * tau + c.kt_b * std::abs(x1) + c.kt_c;
  return lin * lin;
}

double bound_xi2(double tau, double x1, Frequency xi,
                 const BoundConstants& c) {
  (void)tau;
  (void)x1;
  if (xi.xi2 == 0.0) throw DomainError("bound_xi2: xi2 must be nonzero");
  return c.c_beta / std::sqrt(std::abs(xi.xi2));
}

double bound_xi1(double tau, double x1, Frequency xi,
                 const BoundConstants& c) {
  if (xi.xi1 == 0.0) throw DomainError("bound_xi1: xi1 must be nonzero");
  const double k = c.k_a * tau + c.k_b * std::abs(x1);
  return c.c4 / std::abs(xi.xi1) + k * std::abs(xi.xi2) / std::abs(xi.xi1);
}

double bound_global(double tau, double x1, Frequency xi,
                    const BoundConstants& c) {
  const double r = std::hypot(xi.xi1, xi.xi2);
  return std::sqrt(kappa_tilde(tau, x1, c) / (1.0 + std::cbrt(r * r)));
}

std::complex<double> hat_gamma_dagger(LaplaceFrequency xi0, double x1,
                                      double y1, double xi2) {
  if (!(xi0.im < 0.0))
    throw DomainError("hat_gamma_dagger: Im(xi0) must be negative");
  if (x1 > y1) return {0.0, 0.0};
  const std::complex<double> z0(xi0.re, xi0.im);
  const std::complex<double> expo =
      kI * (z0 / 2.0) * (x1 - y1) -
      kI * (xi2 * xi2 / (6.0 * z0)) *
          (x1 * x1 * x1 - y1 * y1 * y1);
  return -(kI / (2.0 * z0)) * std::exp(expo);
}

std::pair<std::complex<double>, std::complex<double>> laplace_chi_identity(
    LaplaceFrequency xi0, double tol) {
  if (!(xi0.im < 0.0))
    throw DomainError("laplace_chi_identity: Im(xi0) must be negative");
  const std::complex<double> z0(xi0.re, xi0.im);
  // t = s^2 absorbs the inverse-square-root endpoint:
  //   Int_0^inf e^{-i xi0 t} (pi t)^{-1/2} dt = (2/sqrt(pi)) Int_0^inf e^{-i xi0 s^2} ds.
  const double s_max = std::sqrt(45.0 / -xi0.im);
  auto f = [&](double s) {
    return std::exp(-kI * z0 * (s * s));
  };
  const std::size_t panels =
      oscillation_panels(std::abs(xi0.re) * s_max * s_max);
  const auto q = integrate_adaptive(f, 0.0, s_max, tol * std::sqrt(M_PI) / 2.0,
                                    10'000'000, panels);
  const std::complex<double> left = 2.0 / std::sqrt(M_PI) * q.value;
  const std::complex<double> right = std::pow(kI * z0, -0.5);
  return {left, right};
}

double decay_slope(double tau, double x1, double lo, double hi, int n,
                   bool along_xi2_axis) {
  std::vector<double> lx, ly;
  for (int i = 0; i < n; ++i) {
    const double g =
        lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    Frequency xi = along_xi2_axis
                       ? Frequency{0.0, g}
                       : Frequency{g, std::pow(g, 2.0 / 3.0)};
    const double mag = std::hypot(xi.xi1, xi.xi2);
    const double v = std::abs(fourier_gamma(tau, x1, 0.0, xi, 1e-10));
    lx.push_back(std::log(mag));
    ly.push_back(std::log(std::max(v, 1e-300)));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- bound-constant calibration -----------------------------------------

namespace {

std::string calibration_grid_id() {
  return "tau:0.25:2:8;x1:-2:2:9;logr:1:4:12;ang:0:pi/2:9;small:0.5,2,5";
}

}  // namespace

BoundConstants calibrate_bounds() {
  std::vector<double> taus, x1s, radii, angles;
  for (int i = 1; i <= 8; ++i) taus.push_back(0.25 * i);
  for (int i = 0; i < 9; ++i) x1s.push_back(-2.0 + 0.5 * i);
  for (int i = 0; i < 12; ++i) radii.push_back(std::pow(10.0, 1.0 + 3.0 * i / 11.0));
  for (int i = 0; i < 9; ++i) angles.push_back(M_PI_2 * i / 8.0);
  const std::vector<double> small_radii = {0.5, 2.0, 5.0};

  double max_cbeta = 0.0;
  double max_c4 = 0.0;
  struct KPt {
    double excess_over_c4, xi2, tau, ax1;
  };
  std::vector<KPt> kpts;
  // per (tau,x1): sup over xi of sqrt(1+|xi|^{2/3}) |F|
  std::vector<std::array<double, 3>> kt_x;  // (tau, |x1|)
  std::vector<double> kt_s;

  for (double tau : taus) {
    for (double x1 : x1s) {
      double s_sup = 0.0;
      auto visit = [&](double r, double ang) {
        const Frequency xi{r * std::cos(ang), r * std::sin(ang)};
        const double v = std::abs(fourier_gamma(tau, x1, 0.0, xi, 1e-8));
        s_sup = std::max(s_sup, std::sqrt(1.0 + std::cbrt(r * r)) * v);
        if (std::abs(xi.xi2) >= 1.0)
          max_cbeta = std::max(max_cbeta, v * std::sqrt(std::abs(xi.xi2)));
        if (std::abs(xi.xi1) >= 1.0) {
          const double rr = v * std::abs(xi.xi1);
          if (std::abs(xi.xi2) <= 1.0)
            max_c4 = std::max(max_c4, rr);
          else
            kpts.push_back({rr, std::abs(xi.xi2), tau, std::abs(x1)});
        }
      };
      for (double r : radii)
        for (double ang : angles) visit(r, ang);
      for (double r : small_radii)
        for (double ang : angles) visit(r, ang);
      kt_x.push_back({tau, std::abs(x1), 1.0});
      kt_s.push_back(s_sup);
    }
  }

  double k_lin = 0.0;
  for (const auto& p : kpts) {
    const double need = (p.excess_over_c4 - max_c4) / p.xi2;
    if (need > 0) k_lin = std::max(k_lin, need / (p.tau + p.ax1));
  }

  // Least-squares affine fit of the global envelope, then shift upward so
  // it dominates every sample.
  double A[3][3] = {{0}};
  double bvec[3] = {0};
  for (std::size_t i = 0; i < kt_x.size(); ++i) {
    const double row[3] = {kt_x[i][0], kt_x[i][1], 1.0};
    for (int r = 0; r < 3; ++r) {
      bvec[r] += row[r] * kt_s[i];
      for (int c = 0; c < 3; ++c) A[r][c] += row[r] * row[c];
    }
  }
  double coef[3] = {0, 0, 0};
  {
    // Gaussian elimination on the 3x3 normal equations.
    double M[3][4];
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) M[r][c] = A[r][c];
      M[r][3] = bvec[r];
    }
    for (int p = 0; p < 3; ++p) {
      int piv = p;
      for (int r = p + 1; r < 3; ++r)
        if (std::abs(M[r][p]) > std::abs(M[piv][p])) piv = r;
      std::swap(M[p], M[piv]);
      for (int r = p + 1; r < 3; ++r) {
        const double f = M[r][p] / M[p][p];
        for (int c = p; c < 4; ++c) M[r][c] -= f * M[p][c];
      }
    }
    for (int r = 2; r >= 0; --r) {
      double s = M[r][3];
      for (int c = r + 1; c < 3; ++c) s -= M[r][c] * coef[c];
      coef[r] = s / M[r][r];
    }
  }
  coef[0] = std::max(coef[0], 0.0);
  coef[1] = std::max(coef[1], 0.0);
  double shift = 0.0;
  for (std::size_t i = 0; i < kt_x.size(); ++i) {
    const double fit = coef[0] * kt_x[i][0] + coef[1] * kt_x[i][1] + coef[2];
    shift = std::max(shift, kt_s[i] - fit);
  }
  coef[2] += shift;

  BoundConstants c{};
  c.c_beta = 1.1 * max_cbeta;
  c.c4 = 1.1 * max_c4;
  c.k_a = 1.1 * k_lin;
  c.k_b = 1.1 * k_lin;
  c.kt_a = 1.1 * coef[0];
  c.kt_b = 1.1 * coef[1];
  c.kt_c = 1.1 * std::max(coef[2], 0.0);
  c.grid_hash = fnv1a(calibration_grid_id());
  return c;
}

void save_bound_constants(std::ostream& os, const BoundConstants& c) {
  os << std::setprecision(17);
  os << "# dhwave bound-envelope constants (1.1 safety factor applied)\n";
  os << "c_beta = " << c.c_beta << "\n";
  os << "c4 = " << c.c4 << "\n";
  os << "k_a = " << c.k_a << "\n";
  os << "k_b = " << c.k_b << "\n";
  os << "kt_a = " << c.kt_a << "\n";
  os << "kt_b = " << c.kt_b << "\n";
  os << "kt_c = " << c.kt_c << "\n";
  os << "grid_hash = " << c.grid_hash << "\n";
}

BoundConstants load_bound_constants(std::istream& is) {
  BoundConstants c{};
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key, eq;
    ls >> key >> eq;
    double v;
    if (key == "grid_hash") {
      std::uint64_t h;
      ls >> h;
      c.grid_hash = h;
      continue;
    }
    ls >> v;
    if (key == "c_beta") c.c_beta = v;
    else if (key == "c4") c.c4 = v;
    else if (key == "k_a") c.k_a = v;
    else if (key == "k_b") c.k_b = v;
    else if (key == "kt_a") c.kt_a = v;
    else if (key == "kt_b") c.kt_b = v;
    else if (key == "kt_c") c.kt_c = v;
  }
  return c;
}

BoundConstants load_bound_constants_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open bound constants file: " + path);
  return load_bound_constants(is);
}

const BoundConstants& BoundConstants::frozen() {
  // Values produced by calibrate_bounds(); mirrored in
  // data/bound_constants.txt.
  static const BoundConstants c = [] {
    BoundConstants k{};
    k.c_beta = 1.4866076141428064;
    k.c4 = 1.0995735753767655;
    k.k_a = 0.059201176485137771;
    k.k_b = 0.059201176485137771;
    k.kt_a = 1.1043708479671246;
    k.kt_b = 0.0;
    k.kt_c = 0.49368469786673325;
    k.grid_hash = fnv1a(calibration_grid_id());
    return k;
  }();
  return c;
}

}  // namespace dhwave
