#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dhwave/kernel.hpp"
#include "dhwave/spectral.hpp"

namespace dhwave {

struct GridSpec {
  double dt = 0.0625;       // time step
  int t_steps = 16;         // number of steps
  double x_extent = 2.2;    // spatial domain [-x_extent, x_extent]^2
  int n_modes = 32;         // lattice modes per axis (see FrequencyLattice)
  std::uint64_t seed = 1;
};

// Half-plane frequency lattice with half-cell offset.  Cell side pi/x_extent;
// modes xi = ((j1 + 1/2) d, (j2 + 1/2) d) for j1 in [0, n), j2 in [-n, n).
// Weight = 2 * integral of the spectral density over the cell, so that
// sum_j w_j cos(xi_j . z) approximates Int cos(xi . z) dmu over the plane.
struct FrequencyLattice {
  std::vector<Frequency> modes;
  std::vector<double> weights;
  double d_xi = 0.0;

  static FrequencyLattice build(const GridSpec& grid,
                                const SpectralMeasureSpec& mu);
  // Everything the lattice cannot represent: |xi| beyond n_modes * d_xi.
  double cutoff_radius() const;
};

// One realization of the smoothed noise increments W_k on a uniform spatial
// grid: value(k, i, j) = W_k at x = (points[i], points[j]).
struct NoiseGrid {
  double dt = 0.0;
  int t_steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;
  std::vector<double> points;  // per-axis grid coordinates
  std::vector<double> values;  // t_steps * n * n, row-major (k, i, j)

  double value(int k, int i, int j) const {
    int n = static_cast<int>(points.size());
    return values[(static_cast<size_t>(k) * n + i) * n + j];
  }

  // Little-endian binary layout: magic "DHWN", u32 version, u64 t_steps,
  // u64 n, f64 dt, u64 seed, u64 sample, n f64 coordinates, then the value
  // array in (k, i, j) order.
  void write_binary(std::ostream& out) const;
  static NoiseGrid read_binary(std::istream& in);
};

// W_k(x) = sqrt(dt) sum_j sqrt(w_j) (A_kj cos(xi_j . x) + B_kj sin(xi_j . x))
// with counter-based A, B keyed on (seed, sample, k, j).
double noise_value(const FrequencyLattice& lat, const GridSpec& grid,
                   std::uint64_t sample, int step, double x1, double x2);

// Full realization on a (2 * n_modes)^2 spatial grid.
// Throws UnsupportedMeasure for measures without a density.
NoiseGrid sample_noise(const GridSpec& grid, const SpectralMeasureSpec& mu,
                       std::uint64_t sample);

struct CovarianceCheck {
  double mc_value = 0.0;       // Monte Carlo estimate of E[M(phi) M(psi)]
  double mc_stderr = 0.0;
  double lattice_value = 0.0;  // exact covariance of the discretized model
  double spectral_value = 0.0; // Int_0^inf Int F phi conj(F psi) dmu dt
};

// M(phi) = Int phi(s, y) M(ds, dy) for a product bump phi (axes read as
// t, y1, y2).  Compares the Monte Carlo estimate of E[M(phi) M(psi)]
// against the exact spectral covariance.  Throws GridTooCoarse when the
// lattice cutoff leaves more than 1% of the spectral integral outside.
CovarianceCheck covariance_mc_check(const TestFunction& phi,
                                    const TestFunction& psi,
                                    const GridSpec& grid,
                                    const SpectralMeasureSpec& mu,
                                    int n_samples);

}  // namespace dhwave
