#include "dhwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dhwave/errors.hpp"
#include "dhwave/kernel.hpp"
#include "dhwave/quadrature.hpp"
#include "dhwave/rng.hpp"

namespace dhwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Lag used for time step k: left-endpoint (non-anticipating) evaluation.
double step_lag(const GridSpec& grid, double t, int k) {
  double lo = k * grid.dt;
  return lo < t ? t - lo : 0.0;
}

double h_of(double tau, double x1, double y1) {
  return (2.0 * tau + x1 - y1) * (y1 * y1 * y1 - x1 * x1 * x1) / 3.0;
}

}  // namespace

KernelWeights KernelWeights::build(const GridSpec& grid, const QueryPoint& p) {
  if (!(p.t > 0.0)) throw DomainError("KernelWeights: t must be positive");
  if (p.t > grid.t_steps * grid.dt + 1e-12)
    throw SupportOverflow("KernelWeights: t exceeds the simulated horizon");

  KernelWeights w;
  w.t_steps = grid.t_steps;
  w.n = 2 * grid.n_modes;
  double X = grid.x_extent;
  double h = 2.0 * X / w.n;
  w.points.resize(w.n);
  for (int i = 0; i < w.n; ++i) w.points[i] = -X + (i + 0.5) * h;
  w.g.assign(static_cast<size_t>(w.t_steps) * w.n * w.n, 0.0);

  // Support extent at the largest lag.
  double tau0 = step_lag(grid, p.t, 0);
  double y1_max = p.x1 + 2.0 * tau0;
  double h_max = 0.0;
  for (int m = 0; m <= 512; ++m) {
    double y1 = p.x1 + (y1_max - p.x1) * m / 512.0;
    h_max = std::max(h_max, h_of(tau0, p.x1, y1));
  }
  double s_max = std::sqrt(std::max(h_max, 0.0));
  if (p.x1 < -X || y1_max > X || p.x2 - s_max < -X || p.x2 + s_max > X)
    throw SupportOverflow("KernelWeights: kernel support exceeds the grid domain");

  auto [nodes, wts] = gauss_legendre(12);

  for (int k = 0; k < w.t_steps; ++k) {
    double tau = step_lag(grid, p.t, k);
    if (tau <= 0.0) continue;
    double a_sup = p.x1, b_sup = p.x1 + 2.0 * tau;
    int i1_lo = std::max(0, static_cast<int>(std::floor((a_sup + X) / h)));
    int i1_hi = std::min(w.n - 1, static_cast<int>(std::floor((b_sup + X) / h)));
    double* slab = &w.g[static_cast<size_t>(k) * w.n * w.n];
    for (int i1 = i1_lo; i1 <= i1_hi; ++i1) {
      double a1 = std::max(-X + i1 * h, a_sup);
      double b1 = std::min(-X + (i1 + 1) * h, b_sup);
      if (b1 <= a1) continue;
      for (size_t m = 0; m < nodes.size(); ++m) {
        double y1 = 0.5 * (a1 + b1) + 0.5 * (b1 - a1) * nodes[m];
        double hv = h_of(tau, p.x1, y1);
        if (hv <= 0.0) continue;
        double s = std::sqrt(hv);
        double gw = 0.5 * (b1 - a1) * wts[m];
        int i2_lo =
            std::max(0, static_cast<int>(std::floor((p.x2 - s + X) / h)));
        int i2_hi = std::min(
            w.n - 1, static_cast<int>(std::floor((p.x2 + s + X) / h)));
        for (int i2 = i2_lo; i2 <= i2_hi; ++i2) {
          double lo = std::clamp((-X + i2 * h - p.x2) / s, -1.0, 1.0);
          double hi = std::clamp((-X + (i2 + 1) * h - p.x2) / s, -1.0, 1.0);
          slab[static_cast<size_t>(i1) * w.n + i2] +=
              gw * (std::asin(hi) - std::asin(lo)) / kTwoPi;
        }
      }
    }
  }
  return w;
}

ModalProjection project_weights(const KernelWeights& w,
                                const FrequencyLattice& lat,
                                const GridSpec& grid) {
  ModalProjection out;
  out.t_steps = w.t_steps;
  out.n_modes = lat.modes.size();
  out.p.assign(static_cast<size_t>(w.t_steps) * out.n_modes, 0.0);
  out.q.assign(out.p.size(), 0.0);

  int n = w.n;
  int nj1 = grid.n_modes, nj2 = 2 * grid.n_modes;
  std::vector<double> c1(static_cast<size_t>(nj1) * n), s1(c1.size());
  std::vector<double> c2(static_cast<size_t>(nj2) * n), s2(c2.size());
  for (int j1 = 0; j1 < nj1; ++j1)
    for (int i = 0; i < n; ++i) {
      double ph = (j1 + 0.5) * lat.d_xi * w.points[i];
      c1[j1 * n + i] = std::cos(ph);
      s1[j1 * n + i] = std::sin(ph);
    }
  for (int j2 = 0; j2 < nj2; ++j2)
    for (int i = 0; i < n; ++i) {
      double ph = (j2 - grid.n_modes + 0.5) * lat.d_xi * w.points[i];
      c2[j2 * n + i] = std::cos(ph);
      s2[j2 * n + i] = std::sin(ph);
    }

  std::vector<double> rc(static_cast<size_t>(n) * nj2), rs(rc.size());
  for (int k = 0; k < w.t_steps; ++k) {
    const double* slab = &w.g[static_cast<size_t>(k) * n * n];
    std::fill(rc.begin(), rc.end(), 0.0);
    std::fill(rs.begin(), rs.end(), 0.0);
    for (int i1 = 0; i1 < n; ++i1) {
      const double* row = slab + static_cast<size_t>(i1) * n;
      for (int j2 = 0; j2 < nj2; ++j2) {
        const double* cc = &c2[static_cast<size_t>(j2) * n];
        const double* ss = &s2[static_cast<size_t>(j2) * n];
        double ac = 0.0, as = 0.0;
        for (int i2 = 0; i2 < n; ++i2) {
          ac += row[i2] * cc[i2];
          as += row[i2] * ss[i2];
        }
        rc[static_cast<size_t>(i1) * nj2 + j2] = ac;
        rs[static_cast<size_t>(i1) * nj2 + j2] = as;
      }
    }
    double* pk = &out.p[static_cast<size_t>(k) * out.n_modes];
    double* qk = &out.q[static_cast<size_t>(k) * out.n_modes];
    for (int j1 = 0; j1 < nj1; ++j1) {
      for (int i1 = 0; i1 < n; ++i1) {
        double cv = c1[static_cast<size_t>(j1) * n + i1];
        double sv = s1[static_cast<size_t>(j1) * n + i1];
        const double* prc = &rc[static_cast<size_t>(i1) * nj2];
        const double* prs = &rs[static_cast<size_t>(i1) * nj2];
        double* pj = pk + static_cast<size_t>(j1) * nj2;
        double* qj = qk + static_cast<size_t>(j1) * nj2;
        for (int j2 = 0; j2 < nj2; ++j2) {
          // cos(xi.y) = c1 c2 - s1 s2, sin(xi.y) = s1 c2 + c1 s2
          pj[j2] += cv * prc[j2] - sv * prs[j2];
          qj[j2] += sv * prc[j2] + cv * prs[j2];
        }
      }
    }
  }
  return out;
}

double lattice_variance(const ModalProjection& proj,
                        const FrequencyLattice& lat, const GridSpec& grid) {
  double acc = 0.0, comp = 0.0;
  for (int k = 0; k < proj.t_steps; ++k) {
    const double* pk = &proj.p[static_cast<size_t>(k) * proj.n_modes];
    const double* qk = &proj.q[static_cast<size_t>(k) * proj.n_modes];
    for (size_t j = 0; j < proj.n_modes; ++j) {
      double term = lat.weights[j] * (pk[j] * pk[j] + qk[j] * qk[j]);
      double y = term - comp;
      double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
    }
  }
  return grid.dt * acc;
}

double solve_field(const ModalProjection& proj, const FrequencyLattice& lat,
                   const GridSpec& grid, std::uint64_t sample) {
  double acc = 0.0, comp = 0.0;
  for (int k = 0; k < proj.t_steps; ++k) {
    const double* pk = &proj.p[static_cast<size_t>(k) * proj.n_modes];
    const double* qk = &proj.q[static_cast<size_t>(k) * proj.n_modes];
    for (size_t j = 0; j < proj.n_modes; ++j) {
      auto g = gaussian_pair(grid.seed, sample, static_cast<std::uint64_t>(k), j);
      double term = std::sqrt(lat.weights[j]) * (g.a * pk[j] + g.b * qk[j]);
      double y = term - comp;
      double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
    }
  }
  return std::sqrt(grid.dt) * acc;
}

double solve_with_noise(const KernelWeights& w, const NoiseGrid& noise) {
  if (noise.t_steps < w.t_steps ||
      static_cast<int>(noise.points.size()) != w.n)
    throw DomainError("solve_with_noise: noise grid does not match weights");
  double acc = 0.0, comp = 0.0;
  for (int k = 0; k < w.t_steps; ++k)
    for (int i1 = 0; i1 < w.n; ++i1)
      for (int i2 = 0; i2 < w.n; ++i2) {
        double gv = w.value(k, i1, i2);
        if (gv == 0.0) continue;
        double term = gv * noise.value(k, i1, i2);
        double y = term - comp;
        double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
      }
  return acc;
}

FieldEnsemble simulate(const GridSpec& grid, const SpectralMeasureSpec& mu,
                       const QueryPoint& p, int n_samples) {
  if (n_samples < 2) throw DomainError("simulate: need >= 2 samples");
  FrequencyLattice lat = FrequencyLattice::build(grid, mu);
  KernelWeights w = KernelWeights::build(grid, p);
  ModalProjection proj = project_weights(w, lat, grid);

  FieldEnsemble out;
  out.n_samples = n_samples;
  double mean = 0.0, m2 = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    double u = solve_field(proj, lat, grid, s);
    double delta = u - mean;
    mean += delta / (s + 1);
    m2 += delta * (u - mean);
  }
  out.mean = mean;
  out.variance = m2 / (n_samples - 1.0);
  out.std_error = std::sqrt(out.variance / n_samples);
  return out;
}

double l2_increment(IncrementAxis axis, double t, double x1, double x2,
                    double delta, const SpectralMeasureSpec& mu, double tol,
                    double r_cut) {
  if (!(t > 0.0) || delta < 0.0)
    throw DomainError("l2_increment: need t > 0 and delta >= 0");
  if (delta == 0.0) return 0.0;
  const double ftol = 1e-7;
  switch (axis) {
    case IncrementAxis::X2: {
      // Only the phase in x2 changes, so the difference has modulus
      // 2 |sin(delta xi2 / 2)| |F Gamma|.
      auto f = [&](double tau, Frequency xi) {
        double sn = std::sin(0.5 * delta * xi.xi2);
        double m = std::abs(fourier_gamma(tau, x1, 0.0, xi, ftol));
        return 4.0 * sn * sn * m * m;
      };
      return time_spectral_integral(t, mu, f, tol, r_cut);
    }
    case IncrementAxis::X1: {
      auto f = [&](double tau, Frequency xi) {
        auto d = fourier_gamma(tau, x1 + delta, 0.0, xi, ftol) -
                 fourier_gamma(tau, x1, 0.0, xi, ftol);
        return std::norm(d);
      };
      return time_spectral_integral(t, mu, f, tol, r_cut);
    }
    case IncrementAxis::Time: {
      auto fd = [&](double tau, Frequency xi) {
        auto d = fourier_gamma(tau + delta, x1, 0.0, xi, ftol) -
                 fourier_gamma(tau, x1, 0.0, xi, ftol);
        return std::norm(d);
      };
      auto fm = [&](double tau, Frequency xi) {
        double m = std::abs(fourier_gamma(tau, x1, 0.0, xi, ftol));
        return m * m;
      };
      return time_spectral_integral(t, mu, fd, 0.5 * tol, r_cut) +
             time_spectral_integral(delta, mu, fm, 0.5 * tol, r_cut);
    }
  }
  throw DomainError("l2_increment: unknown axis");
  (void)x2;  // modulus is independent of x2
}

IncrementEstimate mc_l2_increment(const GridSpec& grid,
                                  const SpectralMeasureSpec& mu,
                                  IncrementAxis axis, const QueryPoint& p,
                                  double delta, int n_samples,
                                  bool common_draws) {
  if (n_samples < 2) throw DomainError("mc_l2_increment: need >= 2 samples");
  QueryPoint ps = p;
  switch (axis) {
    case IncrementAxis::Time: ps.t += delta; break;
    case IncrementAxis::X1: ps.x1 += delta; break;
    case IncrementAxis::X2: ps.x2 += delta; break;
  }
  FrequencyLattice lat = FrequencyLattice::build(grid, mu);
  ModalProjection a = project_weights(KernelWeights::build(grid, p), lat, grid);
  ModalProjection b = project_weights(KernelWeights::build(grid, ps), lat, grid);

  ModalProjection d = b;
  for (size_t i = 0; i < d.p.size(); ++i) {
    d.p[i] -= a.p[i];
    d.q[i] -= a.q[i];
  }

  IncrementEstimate out;
  out.lattice_value = lattice_variance(d, lat, grid);

  auto run = [&](auto&& value_of, std::uint64_t base) {
    double mean = 0.0, m2 = 0.0;
    for (int s = 0; s < n_samples; ++s) {
      double v = value_of(base + s);
      double dm = v - mean;
      mean += dm / (s + 1);
      m2 += dm * (v - mean);
    }
    return std::pair<double, double>(
        mean, std::sqrt(m2 / (n_samples - 1.0) / n_samples));
  };

  if (common_draws) {
    // Each sample realizes both fields from the same noise; the difference
    // uses the projected weight difference directly.
    auto [mean, se] = run(
        [&](std::uint64_t s) {
          double diff = solve_field(d, lat, grid, s);
          return diff * diff;
        },
        0);
    out.mc_value = mean;
    out.mc_stderr = se;
  } else {
    // E|du|^2 = E u^2 + E u'^2 - 2 E u u', each moment from a disjoint
    // sample stream.  Same expectation, much wider spread for small deltas.
    std::uint64_t n = static_cast<std::uint64_t>(n_samples);
    auto [maa, sea] = run(
        [&](std::uint64_t s) {
          double u = solve_field(a, lat, grid, s);
          return u * u;
        },
        0);
    auto [mbb, seb] = run(
        [&](std::uint64_t s) {
          double u = solve_field(b, lat, grid, s);
          return u * u;
        },
        n);
    auto [mab, sec] = run(
        [&](std::uint64_t s) {
          return solve_field(a, lat, grid, s) * solve_field(b, lat, grid, s);
        },
        2 * n);
    out.mc_value = maa + mbb - 2.0 * mab;
    out.mc_stderr = std::sqrt(sea * sea + seb * seb + 4.0 * sec * sec);
  }
  return out;
}

}  // namespace dhwave
