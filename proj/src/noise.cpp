#include "dhwave/noise.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>

#include "dhwave/errors.hpp"
#include "dhwave/quadrature.hpp"
#include "dhwave/rng.hpp"

namespace dhwave {

namespace {

double density_2d(const SpectralMeasureSpec& mu, double xi1, double xi2) {
  return radial_density(mu, std::hypot(xi1, xi2));
}

// Integral of the density over [a1,b1]x[a2,b2] by tensor Gauss-Legendre.
double cell_gl(const SpectralMeasureSpec& mu, double a1, double b1, double a2,
               double b2, int n) {
  return integrate_gl(
      [&](double xi1) {
        return integrate_gl(
            [&](double xi2) { return density_2d(mu, xi1, xi2); }, a2, b2, n);
      },
      a1, b1, n);
}

// Cell integral, with dyadic refinement toward the origin when a corner of
// the cell sits there (integrable singularity for power-law densities).
double cell_integral(const SpectralMeasureSpec& mu, double a1, double b1,
                     double a2, double b2) {
  double eps1 = 1e-12 * (b1 - a1), eps2 = 1e-12 * (b2 - a2);
  bool corner_at_origin =
      std::abs(a1) < eps1 && (std::abs(a2) < eps2 || std::abs(b2) < eps2);
  if (!corner_at_origin) return cell_gl(mu, a1, b1, a2, b2, 6);
  // The density is radial, so reflect the cell into the first quadrant and
  // peel dyadic L-shells off the origin corner.
  double h1 = b1 - a1, h2 = b2 - a2;
  double total = 0.0;
  for (int level = 0; level < 48; ++level) {
    double n1 = 0.5 * h1, n2 = 0.5 * h2;
    double shell = cell_gl(mu, n1, h1, 0.0, h2, 6) +
                   cell_gl(mu, 0.0, n1, n2, h2, 6);
    total += shell;
    if (shell < 1e-14 * std::max(total, 1e-300)) break;
    h1 = n1;
    h2 = n2;
  }
  return total;
}

}  // namespace

FrequencyLattice FrequencyLattice::build(const GridSpec& grid,
                                         const SpectralMeasureSpec& mu) {
  validate(mu);
  if (!admits_synthesis(mu))
    throw UnsupportedMeasure("FrequencyLattice: measure has no usable density");
  if (grid.n_modes < 1 || !(grid.x_extent > 0.0))
    throw DomainError("FrequencyLattice: invalid grid");
  FrequencyLattice lat;
  lat.d_xi = std::numbers::pi / grid.x_extent;
  int n = grid.n_modes;
  lat.modes.reserve(static_cast<size_t>(2 * n) * n);
  lat.weights.reserve(lat.modes.capacity());
  double d = lat.d_xi;
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = -n; j2 < n; ++j2) {
      lat.modes.push_back({(j1 + 0.5) * d, (j2 + 0.5) * d});
      double w =
          2.0 * cell_integral(mu, j1 * d, (j1 + 1) * d, j2 * d, (j2 + 1) * d);
      lat.weights.push_back(w);
    }
  }
  return lat;
}

double FrequencyLattice::cutoff_radius() const {
  double r = 0.0;
  for (const auto& m : modes) r = std::max(r, std::hypot(m.xi1, m.xi2));
  return r;
}

double noise_value(const FrequencyLattice& lat, const GridSpec& grid,
                   std::uint64_t sample, int step, double x1, double x2) {
  double acc = 0.0, comp = 0.0;
  for (size_t j = 0; j < lat.modes.size(); ++j) {
    auto g = gaussian_pair(grid.seed, sample, static_cast<std::uint64_t>(step), j);
    double phase = lat.modes[j].xi1 * x1 + lat.modes[j].xi2 * x2;
    double sw = std::sqrt(lat.weights[j]);
    double term = sw * (g.a * std::cos(phase) + g.b * std::sin(phase));
    double y = term - comp;
    double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return std::sqrt(grid.dt) * acc;
}

NoiseGrid sample_noise(const GridSpec& grid, const SpectralMeasureSpec& mu,
                       std::uint64_t sample) {
  FrequencyLattice lat = FrequencyLattice::build(grid, mu);
  int n = 2 * grid.n_modes;           // spatial points per axis
  double h = 2.0 * grid.x_extent / n;

  NoiseGrid out;
  out.dt = grid.dt;
  out.t_steps = grid.t_steps;
  out.seed = grid.seed;
  out.sample = sample;
  out.points.resize(n);
  for (int i = 0; i < n; ++i) out.points[i] = -grid.x_extent + (i + 0.5) * h;
  out.values.assign(static_cast<size_t>(grid.t_steps) * n * n, 0.0);

  int nj1 = grid.n_modes, nj2 = 2 * grid.n_modes;
  // Per-axis phase tables.
  std::vector<double> c1(static_cast<size_t>(nj1) * n), s1(c1.size());
  std::vector<double> c2(static_cast<size_t>(nj2) * n), s2(c2.size());
  for (int j1 = 0; j1 < nj1; ++j1)
    for (int i = 0; i < n; ++i) {
      double p = (j1 + 0.5) * lat.d_xi * out.points[i];
      c1[j1 * n + i] = std::cos(p);
      s1[j1 * n + i] = std::sin(p);
    }
  for (int j2 = 0; j2 < nj2; ++j2)
    for (int i = 0; i < n; ++i) {
      double p = (j2 - grid.n_modes + 0.5) * lat.d_xi * out.points[i];
      c2[j2 * n + i] = std::cos(p);
      s2[j2 * n + i] = std::sin(p);
    }

  std::vector<double> P(static_cast<size_t>(nj1) * n), Q(P.size());
  double sdt = std::sqrt(grid.dt);
  for (int k = 0; k < grid.t_steps; ++k) {
    std::fill(P.begin(), P.end(), 0.0);
    std::fill(Q.begin(), Q.end(), 0.0);
    for (int j1 = 0; j1 < nj1; ++j1) {
      for (int j2 = 0; j2 < nj2; ++j2) {
        size_t j = static_cast<size_t>(j1) * nj2 + j2;
        auto g = gaussian_pair(grid.seed, sample, k, j);
        double a = std::sqrt(lat.weights[j]) * g.a;
        double b = std::sqrt(lat.weights[j]) * g.b;
        const double* cc = &c2[j2 * n];
        const double* ss = &s2[j2 * n];
        double* p = &P[static_cast<size_t>(j1) * n];
        double* q = &Q[static_cast<size_t>(j1) * n];
        for (int i2 = 0; i2 < n; ++i2) {
          p[i2] += a * cc[i2] + b * ss[i2];
          q[i2] += b * cc[i2] - a * ss[i2];
        }
      }
    }
    double* slab = &out.values[static_cast<size_t>(k) * n * n];
    for (int j1 = 0; j1 < nj1; ++j1) {
      const double* p = &P[static_cast<size_t>(j1) * n];
      const double* q = &Q[static_cast<size_t>(j1) * n];
      for (int i1 = 0; i1 < n; ++i1) {
        double cv = c1[j1 * n + i1], sv = s1[j1 * n + i1];
        double* row = slab + static_cast<size_t>(i1) * n;
        for (int i2 = 0; i2 < n; ++i2) row[i2] += cv * p[i2] + sv * q[i2];
      }
    }
    for (int i = 0; i < n * n; ++i) slab[i] *= sdt;
  }
  return out;
}

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void NoiseGrid::write_binary(std::ostream& out) const {
  out.write("DHWN", 4);
  put<std::uint32_t>(out, 1);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(t_steps));
  put<std::uint64_t>(out, points.size());
  put<double>(out, dt);
  put<std::uint64_t>(out, seed);
  put<std::uint64_t>(out, sample);
  for (double p : points) put<double>(out, p);
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
}

NoiseGrid NoiseGrid::read_binary(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "DHWN", 4) != 0)
    throw DomainError("NoiseGrid: bad magic");
  if (get<std::uint32_t>(in) != 1) throw DomainError("NoiseGrid: bad version");
  NoiseGrid g;
  g.t_steps = static_cast<int>(get<std::uint64_t>(in));
  auto n = get<std::uint64_t>(in);
  g.dt = get<double>(in);
  g.seed = get<std::uint64_t>(in);
  g.sample = get<std::uint64_t>(in);
  g.points.resize(n);
  for (auto& p : g.points) p = get<double>(in);
  g.values.resize(static_cast<size_t>(g.t_steps) * n * n);
  in.read(reinterpret_cast<char*>(g.values.data()),
          static_cast<std::streamsize>(g.values.size() * sizeof(double)));
  if (!in) throw DomainError("NoiseGrid: truncated stream");
  return g;
}

namespace {

// Int b(y) e^{i xi y} dy for one bump axis.
std::complex<double> axis_ft(const BumpAxis& b, double xi) {
  using namespace std::complex_literals;
  int panels = 2 + static_cast<int>(std::abs(xi) * b.radius / 2.0);
  return integrate_adaptive(
             [&](double y) { return b.value(y) * std::exp(1i * xi * y); },
             b.center - b.radius, b.center + b.radius, 1e-12, 400000, panels)
      .value;
}

// Spatial transform of the product bump, axes read as (y1, y2).
std::complex<double> spatial_ft(const TestFunction& phi, double xi1,
                                double xi2) {
  return phi.amplitude * axis_ft(phi.x1, xi1) * axis_ft(phi.x2, xi2);
}

// Int_{r in [r_lo, r_hi]} Re[F phi conj(F psi)] dmu, spatial part only,
// polar coordinates, using evenness in each frequency component.
double spectral_band(const TestFunction& phi, const TestFunction& psi,
                     const SpectralMeasureSpec& mu, double r_lo, double r_hi) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  auto ring = [&](double r) {
    double ang = integrate_gl(
        [&](double th) {
          double xi1 = r * std::cos(th), xi2 = r * std::sin(th);
          double v = 0.0;
          // average the quadrant images so the reduction to the first
          // quadrant is exact even for off-center bumps
          for (double s1 : {-1.0, 1.0})
            for (double s2 : {-1.0, 1.0}) {
              auto zp = spatial_ft(phi, s1 * xi1, s2 * xi2);
              auto zq = spatial_ft(psi, s1 * xi1, s2 * xi2);
              v += (zp * std::conj(zq)).real();
            }
          return 0.25 * v;
        },
        0.0, half_pi, 20);
    return 4.0 * r * radial_density(mu, r) * ang;
  };
  double total = 0.0;
  if (r_lo < 1.0) {
    double q_lo = std::sqrt(r_lo), q_hi = std::sqrt(std::min(1.0, r_hi));
    total += integrate_adaptive(
                 [&](double q) { return q > 0 ? 2.0 * q * ring(q * q) : 0.0; },
                 q_lo, q_hi, 1e-11, 200000)
                 .value;
  }
  if (r_hi > 1.0) {
    double v_lo = std::log(std::max(1.0, r_lo));
    total += integrate_adaptive(
                 [&](double v) {
                   double r = std::exp(v);
                   return r * ring(r);
                 },
                 v_lo, std::log(r_hi), 1e-11, 400000, 8)
                 .value;
  }
  return total;
}

}  // namespace

CovarianceCheck covariance_mc_check(const TestFunction& phi,
                                    const TestFunction& psi,
                                    const GridSpec& grid,
                                    const SpectralMeasureSpec& mu,
                                    int n_samples) {
  if (n_samples < 2) throw DomainError("covariance_mc_check: need >= 2 samples");
  FrequencyLattice lat = FrequencyLattice::build(grid, mu);
  size_t nm = lat.modes.size();

  // Modal coefficients of the two spatial bumps.
  std::vector<double> pa(nm), pb(nm), qa(nm), qb(nm), sw(nm);
  for (size_t j = 0; j < nm; ++j) {
    auto zp = spatial_ft(phi, lat.modes[j].xi1, lat.modes[j].xi2);
    auto zq = spatial_ft(psi, lat.modes[j].xi1, lat.modes[j].xi2);
    pa[j] = zp.real();
    qa[j] = zp.imag();
    pb[j] = zq.real();
    qb[j] = zq.imag();
    sw[j] = std::sqrt(lat.weights[j]);
  }

  CovarianceCheck out;

  // Exact covariance of the discretized model.
  double mode_dot = 0.0;
  for (size_t j = 0; j < nm; ++j)
    mode_dot += lat.weights[j] * (pa[j] * pb[j] + qa[j] * qb[j]);
  double time_dot = 0.0;
  std::vector<double> bt_a(grid.t_steps), bt_b(grid.t_steps);
  for (int k = 0; k < grid.t_steps; ++k) {
    double s = (k + 0.5) * grid.dt;
    bt_a[k] = phi.t.value(s);
    bt_b[k] = psi.t.value(s);
    time_dot += bt_a[k] * bt_b[k];
  }
  out.lattice_value = grid.dt * time_dot * mode_dot;

  // Spectral covariance: exact time overlap times the mu quadrature.
  double t_lo = std::max(phi.t.center - phi.t.radius, psi.t.center - psi.t.radius);
  double t_hi = std::min(phi.t.center + phi.t.radius, psi.t.center + psi.t.radius);
  t_lo = std::max(t_lo, 0.0);
  double time_overlap =
      t_hi > t_lo ? integrate_adaptive(
                        [&](double s) { return phi.t.value(s) * psi.t.value(s); },
                        t_lo, t_hi, 1e-13)
                        .value
                  : 0.0;
  double r_res = std::min(std::min(phi.x1.radius, phi.x2.radius),
                          std::min(psi.x1.radius, psi.x2.radius));
  double r_max = 10.0 + 60.0 / r_res;
  if (const auto* tab = std::get_if<TabulatedRadial>(&mu))
    r_max = std::min(r_max, tab->samples.back().first);
  double spatial_total = spectral_band(phi, psi, mu, 0.0, r_max);
  out.spectral_value = time_overlap * spatial_total;

  // Lattice coverage: the part of the mu integral beyond the cutoff must be
  // negligible, otherwise the sampler cannot represent the target covariance.
  double rc = lat.cutoff_radius();
  if (rc < r_max) {
    double outside = spectral_band(phi, psi, mu, rc, r_max);
    if (std::abs(outside) > 0.01 * std::abs(spatial_total))
      throw GridTooCoarse("covariance_mc_check: lattice cutoff leaves >1% of "
                          "the spectral integral unresolved");
  }

  // Monte Carlo with common draws for both functionals.
  double sdt = std::sqrt(grid.dt);
  double mean = 0.0, m2 = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    double fa = 0.0, fb = 0.0;
    for (int k = 0; k < grid.t_steps; ++k) {
      if (bt_a[k] == 0.0 && bt_b[k] == 0.0) continue;
      double ga = 0.0, gb = 0.0;
      for (size_t j = 0; j < nm; ++j) {
        auto g = gaussian_pair(grid.seed, s, k, j);
        ga += sw[j] * (g.a * pa[j] + g.b * qa[j]);
        gb += sw[j] * (g.a * pb[j] + g.b * qb[j]);
      }
      fa += bt_a[k] * ga;
      fb += bt_b[k] * gb;
    }
    double v = sdt * fa * sdt * fb;
    double delta = v - mean;
    mean += delta / (s + 1);
    m2 += delta * (v - mean);
  }
  out.mc_value = mean;
  out.mc_stderr = std::sqrt(m2 / (n_samples - 1.0) / n_samples);
  return out;
}

}  // namespace dhwave
