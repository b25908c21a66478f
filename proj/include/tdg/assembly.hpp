#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "tdg/basis.hpp"
#include "tdg/mesh.hpp"
#include "tdg/problems.hpp"
#include "tdg/quadrature.hpp"
#include "tdg/solution.hpp"

namespace tdg {

struct PenaltyParams {
  double alpha = 0.5;
  double beta = 0.5;
  double delta = 0.5;

  void validate() const;
};

using BlockKey = std::pair<ElementId, ElementId>;  // (test element, trial element)

/// Contributions of one facet: up to four dense blocks and load vectors.
struct FacetContribution {
  std::vector<std::pair<BlockKey, Eigen::MatrixXcd>> blocks;
  std::vector<std::pair<ElementId, Eigen::VectorXcd>> loads;
};

struct GlobalSystem {
  DofMap dofs;
  std::map<BlockKey, Eigen::MatrixXcd> blocks;  // sorted keys fix the merge order
  Eigen::SparseMatrix<Complex> A;
  Eigen::VectorXcd b;

  Eigen::Index size() const { return b.size(); }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(A); }
};

/// Facet wavenumber: the common k of both sides, or the interface
/// wavenumber when they differ.
double facet_wavenumber(const Mesh& mesh, const Facet& f, const ProblemSpec& problem);

/// Quadrature rule used for all integrals over facet f.
QuadratureRule facet_rule(const Mesh& mesh, const Facet& f);

FacetContribution facet_contribution(const Mesh& mesh, const std::vector<ElementBasis>& bases,
                                     const Facet& f, const ProblemSpec& problem,
                                     const PenaltyParams& params);

/// Assembles A and b over the given facets (default: the mesh skeleton).
/// Facets are processed in parallel and merged in facet order.
GlobalSystem assemble_system(const Mesh& mesh, const ProblemSpec& problem,
                             const PenaltyParams& params);
GlobalSystem assemble_system(const Mesh& mesh, const std::vector<Facet>& facets,
                             const ProblemSpec& problem, const PenaltyParams& params);

/// ||A c - b|| / max(||b||, 1).
double residual(const GlobalSystem& system, const Eigen::VectorXcd& coeffs);

}  // namespace tdg
