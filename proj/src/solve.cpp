#include "tdg/solve.hpp"

#include <cstdio>
#include <limits>
#include <regex>

#include <Eigen/LU>
#include <Eigen/SparseLU>

namespace tdg {

namespace {

double norm1(const Eigen::SparseMatrix<Complex>& A) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < A.outerSize(); ++j) {
    double s = 0.0;
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(A, j); it; ++it) s += std::abs(it.value());
    m = std::max(m, s);
  }
  return m;
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::int64_t pivot_from_message(const std::string& msg) {
  std::smatch m;
  static const std::regex num("([0-9]+)");
  if (std::regex_search(msg, m, num)) return std::stoll(m[1]);
  return -1;
}

void check_finite(const Eigen::VectorXcd& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag()))
      throw SingularSystemError("solution contains non-finite entries (first at index " +
                                    std::to_string(i) + ")",
                                i);
}

}  // namespace

SolveReport solve(const GlobalSystem& system) { return solve(system.A, system.b); }

SolveReport solve(const Eigen::SparseMatrix<Complex>& A, const Eigen::VectorXcd& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw Error("solve: system is not square or right-hand side has the wrong length");
  const Eigen::Index n = A.rows();
  SolveReport rep;
  const double eps = std::numeric_limits<double>::epsilon();
  const double a1 = norm1(A);

  if (n < kDenseLimit) {
    rep.dense = true;
    const Eigen::MatrixXcd dense(A);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(dense);
    const Eigen::VectorXd piv = lu.matrixLU().diagonal().cwiseAbs();
    const double pmax = n > 0 ? piv.maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!(piv[i] > eps * pmax) || !std::isfinite(piv[i]))
        throw SingularSystemError("matrix is numerically singular: pivot " + std::to_string(i) +
                                      " has magnitude " + fmt_g(piv[i]) + " (largest " + fmt_g(pmax) + ")",
                                  i);
    rep.coeffs = lu.solve(b);
    check_finite(rep.coeffs);
    const double inv1 = inverse_norm1_estimate(
        n, [&](const Eigen::VectorXcd& y) { return Eigen::VectorXcd(lu.solve(y)); },
        [&](const Eigen::VectorXcd& y) { return Eigen::VectorXcd(lu.adjoint().solve(y)); });
    rep.condition_estimate = a1 * inv1;
  } else {
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw SingularSystemError("sparse LU failed: " + lu.lastErrorMessage(),
                                pivot_from_message(lu.lastErrorMessage()));
    rep.coeffs = lu.solve(b);
    check_finite(rep.coeffs);
    const double inv1 = inverse_norm1_estimate(
        n, [&](const Eigen::VectorXcd& y) { return Eigen::VectorXcd(lu.solve(y)); },
        [&](const Eigen::VectorXcd& y) { return Eigen::VectorXcd(lu.adjoint().solve(y)); });
    rep.condition_estimate = a1 * inv1;
  }
  const double nb = std::max(b.norm(), 1.0);
  rep.residual = n > 0 ? (A * rep.coeffs - b).norm() / nb : 0.0;
  return rep;
}

}  // namespace tdg
