#include <cmath>

#include "doctest.h"
#include "dhwave/errors.hpp"
#include "dhwave/solver.hpp"

using namespace dhwave;

namespace {
const GridSpec kGrid{0.0625, 16, 2.2, 24, 17};
const GaussianDensity kMu{1.0};
}  // namespace

TEST_CASE("cell weights carry the kernel mass per step") {
  QueryPoint p{0.9, -0.4, 0.1};
  auto w = KernelWeights::build(kGrid, p);
  for (int k = 0; k < w.t_steps; ++k) {
    double lag = p.t - k * kGrid.dt;
    double sum = 0.0;
    for (int i1 = 0; i1 < w.n; ++i1)
      for (int i2 = 0; i2 < w.n; ++i2) sum += w.value(k, i1, i2);
    CAPTURE(k);
    if (lag <= 0.0) {
      CHECK(sum == 0.0);  // causality: no weight ahead of the query time
    } else {
      // total kernel mass at lag tau is exactly tau
      CHECK(sum == doctest::Approx(lag).epsilon(2e-4));
    }
  }
}

TEST_CASE("weights vanish outside the support cone") {
  QueryPoint p{0.5, 0.3, 0.0};
  auto w = KernelWeights::build(kGrid, p);
  double half = kGrid.x_extent / (2 * kGrid.n_modes);
  for (int k = 0; k < w.t_steps; ++k)
    for (int i1 = 0; i1 < w.n; ++i1) {
      double y1 = w.points[i1];
      // only cells wholly outside (x1, x1 + 2t) must be empty
      if (y1 + half > p.x1 && y1 - half < p.x1 + 2 * p.t) continue;
      for (int i2 = 0; i2 < w.n; ++i2) {
        REQUIRE(w.value(k, i1, i2) == 0.0);
      }
    }
}

TEST_CASE("support overflow is detected") {
  CHECK_THROWS_AS(KernelWeights::build(kGrid, QueryPoint{2.0, 0.0, 0.0}),
                  SupportOverflow);  // t beyond the horizon
  CHECK_THROWS_AS(KernelWeights::build(kGrid, QueryPoint{0.9, 1.8, 0.0}),
                  SupportOverflow);  // forward cone leaves the domain
  CHECK_THROWS_AS(KernelWeights::build(kGrid, QueryPoint{0.9, -3.0, 0.0}),
                  SupportOverflow);  // base point outside the domain
}

TEST_CASE("modal and direct solution paths agree") {
  QueryPoint p{0.8, -0.3, 0.2};
  auto lat = FrequencyLattice::build(kGrid, kMu);
  auto w = KernelWeights::build(kGrid, p);
  auto proj = project_weights(w, lat, kGrid);
  for (std::uint64_t s : {0ull, 7ull}) {
    double direct = solve_with_noise(w, sample_noise(kGrid, kMu, s));
    double modal = solve_field(proj, lat, kGrid, s);
    CHECK(modal == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("solution is linear in the noise") {
  QueryPoint p{0.8, -0.3, 0.2};
  auto w = KernelWeights::build(kGrid, p);
  auto noise = sample_noise(kGrid, kMu, 4);
  double u = solve_with_noise(w, noise);
  auto doubled = noise;
  for (auto& v : doubled.values) v *= 2.0;
  CHECK(solve_with_noise(w, doubled) == doctest::Approx(2 * u).epsilon(1e-13));
}

TEST_CASE("causality: late noise does not affect the solution") {
  GridSpec grid = kGrid;
  QueryPoint p{0.5, -0.3, 0.0};  // only the first 8 steps are in the past
  auto w = KernelWeights::build(grid, p);
  auto noise = sample_noise(grid, kMu, 2);
  double u = solve_with_noise(w, noise);
  auto mutated = noise;
  int n = static_cast<int>(noise.points.size());
  for (int k = 8; k < grid.t_steps; ++k)
    for (int i = 0; i < n * n; ++i)
      mutated.values[static_cast<size_t>(k) * n * n + i] += 100.0;
  CHECK(solve_with_noise(w, mutated) == u);
}

TEST_CASE("locality: noise outside the cone does not affect the solution") {
  QueryPoint p{0.5, 0.3, 0.0};
  auto w = KernelWeights::build(kGrid, p);
  auto noise = sample_noise(kGrid, kMu, 2);
  double u = solve_with_noise(w, noise);
  auto mutated = noise;
  int n = static_cast<int>(noise.points.size());
  double half = kGrid.x_extent / (2 * kGrid.n_modes);
  for (int k = 0; k < kGrid.t_steps; ++k)
    for (int i1 = 0; i1 < n; ++i1) {
      double y1 = noise.points[i1];
      // mutate only cells wholly outside the cone in y1
      if (y1 + half > p.x1 && y1 - half < p.x1 + 2 * p.t) continue;
      for (int i2 = 0; i2 < n; ++i2)
        mutated.values[(static_cast<size_t>(k) * n + i1) * n + i2] -= 7.0;
    }
  CHECK(solve_with_noise(w, mutated) == u);
}

TEST_CASE("ensemble statistics match the exact lattice variance") {
  QueryPoint p{1.0, -0.8, 0.0};
  auto lat = FrequencyLattice::build(kGrid, kMu);
  auto proj = project_weights(KernelWeights::build(kGrid, p), lat, kGrid);
  double exact = lattice_variance(proj, lat, kGrid);
  REQUIRE(exact > 0.0);

  auto ens = simulate(kGrid, kMu, p, 1500);
  CHECK(std::abs(ens.mean) < 3.5 * ens.std_error);
  CHECK(ens.variance == doctest::Approx(exact).epsilon(0.1));
}

TEST_CASE("lattice variance approximates the continuum norm integral") {
  QueryPoint p{1.0, -0.8, 0.0};
  auto lat = FrequencyLattice::build(kGrid, kMu);
  auto proj = project_weights(KernelWeights::build(kGrid, p), lat, kGrid);
  double lv = lattice_variance(proj, lat, kGrid);
  double ni = norm_integral(p.t, p.x1, p.x2, kMu, 1e-4);
  // time stepping and cell quadrature leave an O(dt) budget
  CHECK(lv == doctest::Approx(ni).epsilon(0.1));
}

TEST_CASE("spectral increments shrink with the shift") {
  double base = l2_increment(IncrementAxis::X2, 0.75, -0.5, 0.0, 0.4, kMu, 1e-5);
  double half = l2_increment(IncrementAxis::X2, 0.75, -0.5, 0.0, 0.2, kMu, 1e-5);
  CHECK(base > half);
  CHECK(half > 0.0);
  CHECK(l2_increment(IncrementAxis::X2, 0.75, -0.5, 0.0, 0.0, kMu, 1e-5) == 0.0);
  // |e^{i a} - 1| <= |a| gives value <= delta^2 Int |xi2|^2 |F|^2
  double cap = 0.2 * 0.2 *
               time_spectral_integral(
                   0.75, kMu,
                   [](double tau, Frequency xi) {
                     double m = std::abs(fourier_gamma(tau, -0.5, 0.0, xi, 1e-8));
                     return xi.xi2 * xi.xi2 * m * m;
                   },
                   1e-5);
  CHECK(half <= cap * (1 + 1e-6));
}

TEST_CASE("monte carlo increments bracket the lattice value") {
  QueryPoint p{0.5, -0.8, 0.0};
  auto crn = mc_l2_increment(kGrid, kMu, IncrementAxis::X2, p, 0.3, 800);
  CHECK(crn.lattice_value > 0.0);
  CHECK(std::abs(crn.mc_value - crn.lattice_value) <= 3 * crn.mc_stderr);

  auto indep =
      mc_l2_increment(kGrid, kMu, IncrementAxis::X2, p, 0.3, 800, false);
  CHECK(indep.lattice_value == crn.lattice_value);
  CHECK(std::abs(indep.mc_value - indep.lattice_value) <= 3 * indep.mc_stderr);
  // common draws are the variance reduction
  CHECK(crn.mc_stderr < indep.mc_stderr);

  auto zero = mc_l2_increment(kGrid, kMu, IncrementAxis::X2, p, 0.0, 10);
  CHECK(zero.mc_value == 0.0);
  CHECK(zero.mc_stderr == 0.0);
  CHECK(zero.lattice_value == 0.0);
}

TEST_CASE("time increments include the fresh-noise tail") {
  QueryPoint p{0.5, -0.8, 0.0};
  auto t_inc = mc_l2_increment(kGrid, kMu, IncrementAxis::Time, p, 0.125, 800);
  CHECK(t_inc.lattice_value > 0.0);
  CHECK(std::abs(t_inc.mc_value - t_inc.lattice_value) <= 3 * t_inc.mc_stderr);
  double spectral =
      l2_increment(IncrementAxis::Time, p.t, p.x1, p.x2, 0.125, kMu, 1e-4);
  // discretized vs continuum at matching parameters
  CHECK(t_inc.lattice_value == doctest::Approx(spectral).epsilon(0.15));
}
