#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dhwave/errors.hpp"

namespace dhwave {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK values).
namespace gk {
inline constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};
}  // namespace gk

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  std::size_t evals = 0;
};

// One GK15 panel on [a,b].  Returns the Kronrod value and the |K15-G7|
// error estimate.
template <class F>
auto gk15_panel(F& f, double a, double b)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T kron{};
  T gauss{};
  for (int i = 0; i < 8; ++i) {
    const double dx = h * gk::xgk[i];
    T fsum = (i == 7) ? f(c) : T(f(c - dx) + f(c + dx));
    kron += gk::wgk[i] * fsum;
    if (i % 2 == 1) gauss += gk::wg[i / 2] * fsum;
  }
  kron *= h;
  gauss *= h;
  return {kron, std::abs(kron - gauss), 15};
}

// Adaptive bisection on the worst panel until the summed error estimate
// drops below abs_tol.  Throws QuadratureNoConvergence when the evaluation
// budget runs out first.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, double abs_tol,
                        std::size_t max_evals = 1'000'000,
                        std::size_t initial_panels = 1)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  struct Seg {
    double a, b, error;
    T value;
  };
  if (a == b) return {T{}, 0.0, 0};
  initial_panels = std::max<std::size_t>(1, initial_panels);
  if (initial_panels > max_evals / 15)
    throw QuadratureNoConvergence(
        "oscillation panel count exceeds evaluation budget");

  std::vector<Seg> segs;
  segs.reserve(initial_panels + 64);
  std::size_t evals = 0;
  const double w = (b - a) / static_cast<double>(initial_panels);
  for (std::size_t i = 0; i < initial_panels; ++i) {
    const double sa = a + w * static_cast<double>(i);
    const double sb = (i + 1 == initial_panels) ? b : sa + w;
    auto r = gk15_panel(f, sa, sb);
    evals += r.evals;
    segs.push_back({sa, sb, r.error, r.value});
  }

  auto total_error = [&] {
    double e = 0;
    for (const auto& s : segs) e += s.error;
    return e;
  };

  double err = total_error();
  while (err > abs_tol) {
    if (evals + 30 > max_evals)
      throw QuadratureNoConvergence(
          "adaptive quadrature exceeded its evaluation budget");
    auto worst = std::max_element(
        segs.begin(), segs.end(),
        [](const Seg& x, const Seg& y) { return x.error < y.error; });
    const Seg s = *worst;
    const double m = 0.5 * (s.a + s.b);
    if (m <= s.a || m >= s.b)
      throw QuadratureNoConvergence(
          "adaptive quadrature hit the resolution limit");
    auto r1 = gk15_panel(f, s.a, m);
    auto r2 = gk15_panel(f, m, s.b);
    evals += r1.evals + r2.evals;
    *worst = {s.a, m, r1.error, r1.value};
    segs.push_back({m, s.b, r2.error, r2.value});
    err = total_error();
  }

  // Compensated final sum so the result does not depend on split order.
  T total{};
  T comp{};
  std::sort(segs.begin(), segs.end(),
            [](const Seg& x, const Seg& y) { return x.a < y.a; });
  for (const auto& s : segs) {
    T y = s.value - comp;
    T t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  return {total, err, evals};
}

// Gauss-Legendre nodes/weights on [-1,1], cached per order.
inline const std::pair<std::vector<double>, std::vector<double>>&
gauss_legendre(std::size_t n) {
  static std::mutex mu;
  static std::unordered_map<std::size_t,
                            std::pair<std::vector<double>, std::vector<double>>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> x(n), w(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = 0;
      for (std::size_t j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * static_cast<double>(j) + 1.0) * z * p1 -
              static_cast<double>(j) * p2) /
             (static_cast<double>(j) + 1.0);
      }
      pp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w)))
      .first->second;
}

// Fixed-order Gauss-Legendre integral on [a,b].
template <class F>
auto integrate_gl(F&& f, double a, double b, std::size_t n)
    -> std::decay_t<decltype(f(a))> {
  using T = std::decay_t<decltype(f(a))>;
  const auto& [x, w] = gauss_legendre(n);
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T acc{};
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * f(c + h * x[i]);
  return h * acc;
}

}  // namespace dhwave
