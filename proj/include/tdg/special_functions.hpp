#pragma once

#include "tdg/types.hpp"

namespace tdg {

// Bessel and Hankel functions of real argument.  Absolute accuracy is about
// 1e-13 on (0, 200]: power series for small x, Miller backward recurrence
// (normalized by the Neumann sum) for intermediate x and the Hankel
// asymptotic expansion for large x.

/// J_nu(x) for real nu >= 0 and x >= 0.
double bessel_j(double nu, double x);

/// Y_0(x), x > 0.
double bessel_y0(double x);

/// Y_1(x), x > 0.
double bessel_y1(double x);

/// H^(1)_0(x) = J_0(x) + i Y_0(x), x > 0.
Complex hankel1_0(double x);

/// H^(1)_1(x) = J_1(x) + i Y_1(x), x > 0.
Complex hankel1_1(double x);

enum class BesselKind { J, Y, H1 };

/// Uniform entry point.  Y and H1 are available for orders 0 and 1 only.
Complex eval_special(BesselKind kind, double order, double x);

}  // namespace tdg
