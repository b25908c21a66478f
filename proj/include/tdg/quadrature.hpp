#pragma once

#include <vector>

#include "tdg/types.hpp"

namespace tdg {

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Points in physical coordinates with positive weights summing to the
/// measure of the integration domain.
struct QuadratureRule {
  std::vector<Vec3> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre nodes/weights by Newton iteration on P_n.  Rules up to
/// n = 128 are cached in a read-only table.
const GaussRule& gauss_rule(int n);

/// Number of Gauss points per direction for plane-wave products with
/// wavenumber up to `k` on an interval of length `length`.  The integrand
/// e^{i w t}, |w| <= 2k, is integrated with a Gauss remainder bound below
/// 1e-16 relative to the interval length; at least q + 2 points are used.
int oscillatory_order(double k, double length, int q);

/// Tensor Gauss rule on `box` with `n` points along every axis of nonzero
/// extent (a facet box has zero extent along its normal axis).
QuadratureRule tensor_rule(const Box& box, int n);

/// Same as tensor_rule but with the point count chosen per axis by
/// oscillatory_order(k, extent, q).
QuadratureRule oscillatory_rule(const Box& box, double k, int q);

/// Cell rule for element integrals with wavenumber k and degree q.
inline QuadratureRule volume_rule(const Box& cell, double k, int q) {
  return oscillatory_rule(cell, k, q);
}

}  // namespace tdg
