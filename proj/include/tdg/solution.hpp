#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "tdg/basis.hpp"
#include "tdg/mesh.hpp"

namespace tdg {

/// Contiguous coefficient ranges, leaves in ascending id order.
struct DofMap {
  std::vector<Eigen::Index> offset;  // by element id, -1 for refined nodes
  std::vector<Eigen::Index> count;
  Eigen::Index size = 0;

  Eigen::Index begin(ElementId id) const { return offset[id]; }
  Eigen::Index length(ElementId id) const { return count[id]; }
};

DofMap build_dof_map(const Mesh& mesh);

/// Per-element plane-wave coefficients on a fixed mesh.
struct DiscreteSolution {
  std::shared_ptr<const Mesh> mesh;
  std::vector<ElementBasis> bases;  // by element id
  DofMap dofs;
  Eigen::VectorXcd coeffs;

  DiscreteSolution() = default;
  DiscreteSolution(std::shared_ptr<const Mesh> m, Eigen::VectorXcd c);

  auto local(ElementId id) const { return coeffs.segment(dofs.begin(id), dofs.length(id)); }
  /// u_hp restricted to element id, evaluated at x (x may lie outside it).
  Complex value(ElementId id, const Vec3& x) const;
  CVec3 gradient(ElementId id, const Vec3& x) const;
  /// Hessian of u_hp|_K at x.
  Eigen::Matrix3cd hessian(ElementId id, const Vec3& x) const;
};

}  // namespace tdg
