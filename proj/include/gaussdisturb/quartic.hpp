#pragma once

#include <vector>

namespace gaussdisturb {

/// Real roots of c2 x^2 + c1 x + c0 = 0 (ascending). Degenerate leading
/// coefficients reduce the degree.
std::vector<double> solve_quadratic(double c2, double c1, double c0);

/// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 = 0 (ascending), via the
/// trigonometric/Cardano forms with a Newton polish on the input
/// polynomial.
std::vector<double> solve_cubic(double c3, double c2, double c1, double c0);

/// Real roots of c4 x^4 + ... + c0 = 0 (ascending), via the resolvent
/// cubic (Ferrari) with a Newton polish. Multiple roots are reported once
/// per distinct value.
std::vector<double> solve_quartic(double c4, double c3, double c2, double c1,
                                  double c0);

} // namespace gaussdisturb
