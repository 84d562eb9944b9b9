#include "dhwave/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "dhwave/errors.hpp"
#include "dhwave/quadrature.hpp"

namespace dhwave {

double support_radicand(const KernelPoint& p) {
  const double cubes = p.y1 * p.y1 * p.y1 - p.x1 * p.x1 * p.x1;
  return cubes * (2.0 * p.t + p.x1 - p.y1) - 3.0 * p.x2 * p.x2;
}

bool in_support(const KernelPoint& p) {
  return p.t > 0.0 && p.y1 > p.x1 && support_radicand(p) > 0.0;
}

double gamma_eval(const KernelPoint& p) {
  if (!in_support(p)) return 0.0;
  const double rad = support_radicand(p);
  return std::sqrt(3.0) / (2.0 * M_PI) / std::sqrt(rad);
}

double BumpAxis::value(double s) const {
  const double u = (s - center) / radius;
  const double d = 1.0 - u * u;
  if (d <= 0.0) return 0.0;
  return std::exp(-1.0 / d);
}

double BumpAxis::d1(double s) const {
  const double u = (s - center) / radius;
  const double d = 1.0 - u * u;
  if (d <= 0.0) return 0.0;
  const double g = -2.0 * u / (d * d);
  return std::exp(-1.0 / d) * g / radius;
}

double BumpAxis::d2(double s) const {
  const double u = (s - center) / radius;
  const double d = 1.0 - u * u;
  if (d <= 0.0) return 0.0;
  const double g = -2.0 * u / (d * d);
  const double gp = (-2.0 - 6.0 * u * u) / (d * d * d);
  return std::exp(-1.0 / d) * (g * g + gp) / (radius * radius);
}

double TestFunction::value(double tt, double xx1, double xx2) const {
  return amplitude * t.value(tt) * x1.value(xx1) * x2.value(xx2);
}

double lop_apply(const TestFunction& phi, double t, double x1, double x2) {
  const double bt = phi.t.value(t), bt1 = phi.t.d1(t), bt2 = phi.t.d2(t);
  const double b1 = phi.x1.value(x1), b11 = phi.x1.d1(x1);
  const double b2 = phi.x2.value(x2), b22 = phi.x2.d2(x2);
  // dt^2 phi - 2 dt dx1 phi - x1^2 dx2^2 phi
  return phi.amplitude *
         (bt2 * b1 * b2 - 2.0 * bt1 * b11 * b2 - x1 * x1 * bt * b1 * b22);
}

double weak_apply(double y1, const TestFunction& phi, double tol,
                  std::size_t max_evals) {
  if (!(tol > 0.0)) throw DomainError("weak_apply: tol must be positive");

  const double t_lo = std::max(0.0, phi.t.center - phi.t.radius);
  const double t_hi = phi.t.center + phi.t.radius;
  if (t_hi <= 0.0) return 0.0;

  // In (t, lambda, theta) with x1 = y1 - 2*lambda*t and
  // x2 = sqrt(hbar)*sin(theta), hbar = (y1^3-x1^3)(2t+x1-y1)/3, the measure
  // Gamma dx1 dx2 becomes (2t / (2 pi)) dlambda dtheta: the kernel blow-up
  // at the support boundary cancels against the Jacobian exactly.
  auto inner_theta = [&](double t, double lam, double inner_tol) {
    const double x1 = y1 - 2.0 * lam * t;
    const double hbar =
        (y1 * y1 * y1 - x1 * x1 * x1) * (2.0 * t * (1.0 - lam)) / 3.0;
    const double sh = std::sqrt(std::max(0.0, hbar));
    auto f = [&](double theta) {
      return lop_apply(phi, t, x1, sh * std::sin(theta));
    };
    return integrate_adaptive(f, -M_PI_2, M_PI_2, inner_tol, max_evals).value;
  };

  const double t_span = t_hi - t_lo;
  auto f_t = [&](double t) {
    auto f_lam = [&](double lam) {
      return inner_theta(t, lam, 0.02 * tol / (1.0 + t_span));
    };
    const double lam_int =
        integrate_adaptive(f_lam, 0.0, 1.0, 0.05 * tol / (1.0 + t_span),
                           max_evals)
            .value;
    return (2.0 * t / (2.0 * M_PI)) * lam_int;
  };
  return integrate_adaptive(f_t, t_lo, t_hi, 0.5 * tol, max_evals).value;
}

}  // namespace dhwave
