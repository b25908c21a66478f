#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tdg/mesh.hpp"
#include "tdg/solution.hpp"

namespace tdg {

/// Eigenpairs sorted by |eigenvalue|, largest first.  Eigenvectors are unit
/// and sign-normalized (first nonzero component positive).
struct SymEigen {
  std::vector<double> values;
  std::vector<Vec3> vectors;
};

/// Closed form for dim 2 (upper-left block), cyclic Jacobi for dim 3.
SymEigen symmetric_eigen(const Eigen::Matrix3d& h, int dim);

struct EigenPairs {
  SymEigen re;  // Hessian of Re u_hp at the centroid
  SymEigen im;  // Hessian of Im u_hp
};

EigenPairs hessian_eigenpairs(const DiscreteSolution& solution, ElementId id);

/// Selection table of the potential dominant direction (third pairs in 3D
/// are ignored).  Returns nothing when no direction dominates.
std::optional<Vec3> potential_direction(const EigenPairs& pairs, double lambda = 2.0);

/// r = Re[(grad u . d + i k u) / (i k u)] at x_K + delta_ball d.
double impedance_ratio(const DiscreteSolution& solution, ElementId id, const Vec3& d,
                       double delta_ball = 0.0);

/// Keeps d when the impedance ratio reaches the aligned-wave threshold
/// (1 at delta_ball = 0), otherwise flips it.
Vec3 orient_direction(const DiscreteSolution& solution, ElementId id, const Vec3& d,
                      double delta_ball = 0.0);

enum class DirectionPolicy { none, marked_p, marked_all, all };

struct DirectionalParams {
  double lambda = 2.0;
  double delta_ball = 0.0;
};

/// Dominant direction of element id, if any.
std::optional<Vec3> dominant_direction(const DiscreteSolution& solution, ElementId id,
                                       const DirectionalParams& params);

/// Updates the frames of `targets` in `mesh` (the mesh the solution lives on,
/// or a copy with identical ids).  Elements without a dominant direction keep
/// their frame.  Returns the number of frames changed.
int update_frames(Mesh& mesh, const DiscreteSolution& solution,
                  const std::vector<ElementId>& targets, const DirectionalParams& params);

/// Elements selected by a policy: marked_p -> p_refined, marked_all ->
/// marked, all -> every leaf.
std::vector<ElementId> policy_targets(const Mesh& mesh, DirectionPolicy policy,
                                      const std::vector<ElementId>& marked,
                                      const std::vector<ElementId>& p_refined);

/// Convenience: policy_targets followed by update_frames.
int apply_directional_adaptivity(Mesh& mesh, const DiscreteSolution& solution,
                                 DirectionPolicy policy, const std::vector<ElementId>& marked,
                                 const std::vector<ElementId>& p_refined,
                                 const DirectionalParams& params);

}  // namespace tdg
