#pragma once

#include <vector>

#include "dhwave/noise.hpp"

namespace dhwave {

struct QueryPoint {
  double t;
  double x1;
  double x2;
};

// Cell-integrated kernel weights for one query point: g(k, i1, i2) =
// integral of the fundamental solution over spatial cell (i1, i2) at the
// lag of time step k.  Throws SupportOverflow when the kernel's support
// sticks out of the grid domain.
struct KernelWeights {
  int t_steps = 0;
  int n = 0;  // spatial cells per axis
  std::vector<double> g;
  std::vector<double> points;  // cell centers per axis

  double value(int k, int i1, int i2) const {
    return g[(static_cast<size_t>(k) * n + i1) * n + i2];
  }

  static KernelWeights build(const GridSpec& grid, const QueryPoint& p);
};

// p(k, j), q(k, j): kernel weights projected on the lattice modes,
// P_kj = sum_c G_kc cos(xi_j . y_c), Q likewise with sin.
struct ModalProjection {
  int t_steps = 0;
  size_t n_modes = 0;
  std::vector<double> p;
  std::vector<double> q;
};

ModalProjection project_weights(const KernelWeights& w,
                                const FrequencyLattice& lat,
                                const GridSpec& grid);

// Exact variance of the discretized solution under the lattice noise model:
// dt * sum_k sum_j w_j (P_kj^2 + Q_kj^2).
double lattice_variance(const ModalProjection& proj,
                        const FrequencyLattice& lat, const GridSpec& grid);

// One realization of the solution value, counter-based draws keyed on
// (seed, sample, step, mode).
double solve_field(const ModalProjection& proj, const FrequencyLattice& lat,
                   const GridSpec& grid, std::uint64_t sample);

// Same value computed directly from a stored noise realization, at one
// query point.  Exposes the raw kernel weights path used by support and
// causality checks.
double solve_with_noise(const KernelWeights& w, const NoiseGrid& noise);

struct FieldEnsemble {
  int n_samples = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;  // of the mean
};

FieldEnsemble simulate(const GridSpec& grid, const SpectralMeasureSpec& mu,
                       const QueryPoint& p, int n_samples);

enum class IncrementAxis { Time, X1, X2 };

// Continuum L2 increment: E[(u(shifted point) - u(point))^2] via the
// spectral representation of the solution covariance.
double l2_increment(IncrementAxis axis, double t, double x1, double x2,
                    double delta, const SpectralMeasureSpec& mu, double tol,
                    double r_cut = 800.0);

struct IncrementEstimate {
  double mc_value = 0.0;
  double mc_stderr = 0.0;
  double lattice_value = 0.0;  // exact for the discretized model
};

// Discretized counterpart.  With common_draws the two fields share every
// noise realization (variance reduction); otherwise they are independent,
// which estimates E u^2 + E u'^2 - 2 E u u' only through the sample spread.
IncrementEstimate mc_l2_increment(const GridSpec& grid,
                                  const SpectralMeasureSpec& mu,
                                  IncrementAxis axis, const QueryPoint& p,
                                  double delta, int n_samples,
                                  bool common_draws = true);

}  // namespace dhwave
