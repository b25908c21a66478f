#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "tdg/assembly.hpp"

namespace tdg {

struct SolveReport {
  Eigen::VectorXcd coeffs;
  double condition_estimate = 0.0;  // 1-norm
  double residual = 0.0;
  bool dense = false;
};

/// Systems below this dimension use dense partial-pivoting LU.
inline constexpr Eigen::Index kDenseLimit = 2000;

/// Direct solve plus 1-norm condition estimate.  Throws SingularSystemError
/// when a pivot vanishes relative to the largest one.
SolveReport solve(const GlobalSystem& system);
SolveReport solve(const Eigen::SparseMatrix<Complex>& A, const Eigen::VectorXcd& b);

/// Hager/Higham estimate of ||A^{-1}||_1 given solvers for A x = y and
/// A^H x = y.
template <class Solve, class SolveAdjoint>
double inverse_norm1_estimate(Eigen::Index n, Solve&& solve_a, SolveAdjoint&& solve_ah);

}  // namespace tdg

#include "tdg/detail/condition_estimate.hpp"
