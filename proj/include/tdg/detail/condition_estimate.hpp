#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "tdg/types.hpp"

namespace tdg {

// Higham's complex variant of Hager's 1-norm power iteration (as in LAPACK
// zlacon), plus the alternating-sign test vector safeguard.
template <class Solve, class SolveAdjoint>
double inverse_norm1_estimate(Eigen::Index n, Solve&& solve_a, SolveAdjoint&& solve_ah) {
  if (n == 0) return 0.0;
  Eigen::VectorXcd x = Eigen::VectorXcd::Constant(n, Complex(1.0 / n, 0.0));
  double est = 0.0;
  Eigen::Index last = -1;
  for (int it = 0; it < 5; ++it) {
    const Eigen::VectorXcd y = solve_a(x);
    const double ny = y.cwiseAbs().sum();
    if (it > 0 && ny <= est) break;
    est = ny;
    Eigen::VectorXcd xi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(y[i]);
      xi[i] = a > 0.0 ? y[i] / a : Complex(1.0, 0.0);
    }
    const Eigen::VectorXcd z = solve_ah(xi);
    Eigen::Index j = 0;
    const Eigen::VectorXd az = z.cwiseAbs();
    az.maxCoeff(&j);
    if (j == last) break;
    last = j;
    x.setZero();
    x[j] = 1.0;
  }
  Eigen::VectorXcd alt(n);
  for (Eigen::Index i = 0; i < n; ++i)
    alt[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + static_cast<double>(i) / std::max<Eigen::Index>(n - 1, 1));
  const double alt_est = 2.0 * solve_a(alt).cwiseAbs().sum() / (3.0 * n);
  return std::max(est, alt_est);
}

}  // namespace tdg
