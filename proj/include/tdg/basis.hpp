#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "tdg/frame.hpp"
#include "tdg/mesh.hpp"
#include "tdg/types.hpp"

namespace tdg {

// Directions are stored as Vec3; in 2D the z component is zero.

/// Reference direction set with p directions.  2D: equispaced angles
/// starting at (1,0).  3D: a maximum-determinant point set read from
/// sphere_points_p<NN>.txt, rotated so the first direction is (0,0,1).
std::vector<Vec3> canonical_directions(int p, int dim,
                                       SpherePointSource source = SpherePointSource::extremal);

/// Canonical set turned by `frame`; the first direction is the frame's
/// dominant direction.  An identity frame returns the canonical set exactly.
std::vector<Vec3> rotated_directions(int p, const DirectionFrame& frame, int dim,
                                     SpherePointSource source = SpherePointSource::extremal);

/// Orthogonal T with T (0,0,1) = d.  For d on the z axis, T is the identity
/// (d = +z) or diag(1,-1,-1) (d = -z).
Eigen::Matrix3d rotation_to(const Vec3& d);

/// Frame whose first direction is the unit vector `d`.  In 2D the angle is
/// reported in [0, 2 pi).
DirectionFrame frame_from_direction(const Vec3& d, int dim);

/// First direction of a frame (cos/sin of the angle in 2D, third column of
/// the rotation in 3D).
Vec3 frame_direction(const DirectionFrame& frame, int dim);

/// Quasi-uniform spherical Fibonacci lattice; fallback when no extremal set
/// is bundled for p.
std::vector<Vec3> fibonacci_sphere(int p);

/// True if a bundled extremal set exists for p.
bool has_sphere_points(int p);

/// Directory searched for the point-set files.  Precedence: TDG_DATA_DIR,
/// then set_data_directory, then the build-time default.
void set_data_directory(const std::string& dir);
std::string data_directory();

/// Plane waves exp(i k d_l . (x - x_K)) of one element.
struct ElementBasis {
  double k = 0.0;
  Vec3 center = Vec3::Zero();
  Eigen::Matrix<double, Eigen::Dynamic, 3> dirs;  // one direction per row

  Eigen::Index size() const { return dirs.rows(); }

  /// Values at a batch of points, one row per point.
  Eigen::MatrixXcd values(const std::vector<Vec3>& points) const;
  Eigen::VectorXcd values_at(const Vec3& x) const;
};

ElementBasis element_basis(const Mesh& mesh, ElementId id);

/// Bases of all leaves, indexed by element id (refined nodes stay empty).
std::vector<ElementBasis> build_bases(const Mesh& mesh);

struct BasisEval {
  Eigen::VectorXcd value;                // p
  Eigen::Matrix<Complex, Eigen::Dynamic, 3> gradient;  // p x 3
  std::vector<Eigen::Matrix3cd> hessian;  // p entries when order >= 2
};

/// Values (order 0), gradients (order >= 1) and Hessians (order 2) at x.
BasisEval eval_basis(const ElementBasis& basis, const Vec3& x, int order);

}  // namespace tdg
