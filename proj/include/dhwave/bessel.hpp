#pragma once

namespace dhwave {

// Bessel functions of the first kind, orders zero and one.
// Power series up to |z| <= 12; beyond that the Hankel-type representation
// sqrt(2/(pi z)) [cos(z - nu pi/2 - pi/4) P - sin(...) Q] with P, Q obtained
// from the exact Laplace-integral form of the modulus functions.
double bessel_j0(double z);
double bessel_j1(double z);

}  // namespace dhwave
