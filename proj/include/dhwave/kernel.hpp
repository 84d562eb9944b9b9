#pragma once

#include <cstddef>

namespace dhwave {

// Spacetime evaluation point for the kernel: time t, observation
// coordinates (x1, x2) and source coordinate y1.
struct KernelPoint {
  double t;
  double x1;
  double y1;
  double x2;
};

// Open support region of the kernel for fixed (x1, y1):
// t > 0, y1 > x1 and (y1^3 - x1^3)(2t + x1 - y1) - 3 x2^2 > 0.
bool in_support(const KernelPoint& p);

// Radicand (y1^3 - x1^3)(2t + x1 - y1) - 3 x2^2.
double support_radicand(const KernelPoint& p);

// Closed-form kernel value sqrt(3)/(2 pi) * radicand^{-1/2} on the support,
// 0 elsewhere.  Boundary convention: exact zeros of the radicand map to 0,
// so the function is total and never returns infinity.
double gamma_eval(const KernelPoint& p);

// One axis of a compactly supported bump profile exp(-1/(1-u^2)),
// u = (s - center)/radius, with analytic derivatives up to order two.
struct BumpAxis {
  double center = 0.0;
  double radius = 1.0;

  double value(double s) const;
  double d1(double s) const;
  double d2(double s) const;
};

// Product bump phi(t,x1,x2) = amplitude * b_t(t) b_1(x1) b_2(x2).
struct TestFunction {
  BumpAxis t;
  BumpAxis x1;
  BumpAxis x2;
  double amplitude = 1.0;

  double value(double tt, double xx1, double xx2) const;
};

// (L phi)(q) with L = dt^2 - 2 dt dx1 - x1^2 dx2^2, evaluated analytically
// from the product form.  Zero outside supp(phi).
double lop_apply(const TestFunction& phi, double t, double x1, double x2);

// Quadrature of Int Gamma(t,x1,y1,x2) (L phi)(t,x1,x2) dt dx1 dx2.
// L is formally self-adjoint (its coefficients depend on x1 only through
// x1^2 multiplying the x2-derivatives, and the mixed term has constant
// coefficients), so this equals <L Gamma, phi> = phi(0, y1, 0).
// The integral is taken in the coordinates x1 = y1 - 2*lambda*t,
// x2 = sqrt(hbar) * sin(theta), in which the inverse-square-root
// singularity of Gamma is absorbed by the Jacobian.
double weak_apply(double y1, const TestFunction& phi, double tol,
                  std::size_t max_evals = 1'000'000);

}  // namespace dhwave
