#include "tdg/assembly.hpp"

#include <algorithm>

#include "tdg/parallel.hpp"

namespace tdg {

namespace {

const Complex kI(0.0, 1.0);

struct Side {
  ElementId id;
  double sigma;             // +1 on side_a, -1 on side_b
  Eigen::MatrixXcd values;  // quadrature points x basis
  Eigen::VectorXd dn;       // d_l . n with n outward from side_a
  double k;
};

Side make_side(const std::vector<ElementBasis>& bases, ElementId id, double sigma,
               const QuadratureRule& rule, const Vec3& n) {
  const ElementBasis& b = bases.at(id);
  if (b.size() == 0) throw AssemblyError("facet references element " + std::to_string(id) + " without basis");
  return Side{id, sigma, b.values(rule.points), b.dirs * n, b.k};
}

}  // namespace

void PenaltyParams::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (!(delta > 0.0 && delta <= 0.5)) throw ConfigError("delta must lie in (0, 1/2]");
}

double facet_wavenumber(const Mesh& mesh, const Facet& f, const ProblemSpec& problem) {
  const double ka = mesh.element(f.side_a).k;
  if (f.side_b == kNoElement) return ka;
  const double kb = mesh.element(f.side_b).k;
  return ka == kb ? ka : problem.interface_wavenumber();
}

QuadratureRule facet_rule(const Mesh& mesh, const Facet& f) {
  double k = mesh.element(f.side_a).k;
  int q = mesh.element(f.side_a).q;
  if (f.side_b != kNoElement) {
    k = std::max(k, mesh.element(f.side_b).k);
    q = std::max(q, mesh.element(f.side_b).q);
  }
  return oscillatory_rule(f.geometry, k, q);
}

FacetContribution facet_contribution(const Mesh& mesh, const std::vector<ElementBasis>& bases,
                                     const Facet& f, const ProblemSpec& problem,
                                     const PenaltyParams& prm) {
  const bool interior = f.kind == FacetKind::interior;
  if (interior != (f.side_b != kNoElement))
    throw AssemblyError("facet of element " + std::to_string(f.side_a) +
                        " has an inconsistent interior/boundary tag");
  const QuadratureRule rule = facet_rule(mesh, f);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(),
                                            static_cast<Eigen::Index>(rule.weights.size()));
  FacetContribution out;

  if (interior) {
    const double kf = facet_wavenumber(mesh, f, problem);
    const Side sides[2] = {make_side(bases, f.side_a, 1.0, rule, f.normal),
                           make_side(bases, f.side_b, -1.0, rule, f.normal)};
    for (const Side& t : sides) {
      const Eigen::MatrixXcd tw = (t.values.adjoint() * w.asDiagonal()).eval();
      for (const Side& s : sides) {
        Eigen::MatrixXcd blk = tw * s.values;  // int phi_j^s conj(phi_i^t)
        const double ss = s.sigma * t.sigma;
        for (Eigen::Index j = 0; j < blk.cols(); ++j) {
          const double bj = s.dn[j];
          for (Eigen::Index i = 0; i < blk.rows(); ++i) {
            const double ai = t.dn[i];
            const Complex c = t.sigma * (-0.5 * kI * t.k * ai)
                            + ss * kI * prm.beta * s.k * t.k * ai * bj / kf
                            + t.sigma * (-0.5 * kI * s.k * bj)
                            + ss * kI * prm.alpha * kf;
            blk(i, j) *= c;
          }
        }
        out.blocks.emplace_back(BlockKey{t.id, s.id}, std::move(blk));
      }
    }
    return out;
  }

  const Side a = make_side(bases, f.side_a, 1.0, rule, f.normal);
  const double k = a.k;
  const Eigen::MatrixXcd tw = (a.values.adjoint() * w.asDiagonal()).eval();
  Eigen::MatrixXcd blk = tw * a.values;
  Eigen::VectorXcd g(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t q = 0; q < rule.size(); ++q)
    g[static_cast<Eigen::Index>(q)] = boundary_data(problem, rule.points[q], f.normal, f.kind, k);
  Eigen::VectorXcd load = tw * g;  // int g conj(phi_i)

  if (f.kind == FacetKind::robin) {
    const double th = problem.vartheta;
    const double dl = prm.delta;
    for (Eigen::Index j = 0; j < blk.cols(); ++j)
      for (Eigen::Index i = 0; i < blk.rows(); ++i) {
        const double ai = a.dn[i], bj = a.dn[j];
        blk(i, j) *= (1.0 - dl) * (-kI * k * ai + kI * k * th) + kI * dl * k * (ai * bj / th - bj);
      }
    for (Eigen::Index i = 0; i < load.size(); ++i) load[i] *= (1.0 - dl) + dl * a.dn[i] / th;
  } else {
    for (Eigen::Index j = 0; j < blk.cols(); ++j)
      for (Eigen::Index i = 0; i < blk.rows(); ++i) blk(i, j) *= kI * k * (prm.alpha - a.dn[j]);
    for (Eigen::Index i = 0; i < load.size(); ++i) load[i] *= kI * k * (prm.alpha + a.dn[i]);
  }
  out.blocks.emplace_back(BlockKey{a.id, a.id}, std::move(blk));
  out.loads.emplace_back(a.id, std::move(load));
  return out;
}

GlobalSystem assemble_system(const Mesh& mesh, const ProblemSpec& problem,
                             const PenaltyParams& params) {
  return assemble_system(mesh, skeleton_facets(mesh), problem, params);
}

GlobalSystem assemble_system(const Mesh& mesh, const std::vector<Facet>& facets,
                             const ProblemSpec& problem, const PenaltyParams& params) {
  params.validate();
  const std::vector<ElementBasis> bases = build_bases(mesh);
  std::vector<FacetContribution> slots(facets.size());
  parallel_for(facets.size(), [&](std::size_t i) {
    slots[i] = facet_contribution(mesh, bases, facets[i], problem, params);
  });

  GlobalSystem sys;
  sys.dofs = build_dof_map(mesh);
  sys.b = Eigen::VectorXcd::Zero(sys.dofs.size);
  for (FacetContribution& c : slots) {
    for (auto& [key, blk] : c.blocks) {
      auto [it, fresh] = sys.blocks.try_emplace(key, std::move(blk));
      if (!fresh) it->second += blk;
    }
    for (auto& [id, load] : c.loads) sys.b.segment(sys.dofs.begin(id), load.size()) += load;
  }

  std::size_t nnz = 0;
  for (const auto& [key, blk] : sys.blocks) nnz += static_cast<std::size_t>(blk.size());
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(nnz);
  for (const auto& [key, blk] : sys.blocks) {
    const Eigen::Index r0 = sys.dofs.begin(key.first);
    const Eigen::Index c0 = sys.dofs.begin(key.second);
    for (Eigen::Index j = 0; j < blk.cols(); ++j)
      for (Eigen::Index i = 0; i < blk.rows(); ++i) trip.emplace_back(r0 + i, c0 + j, blk(i, j));
  }
  sys.A.resize(sys.dofs.size, sys.dofs.size);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  return sys;
}

double residual(const GlobalSystem& system, const Eigen::VectorXcd& coeffs) {
  if (coeffs.size() != system.size())
    throw Error("residual: coefficient vector has " + std::to_string(coeffs.size()) +
                " entries, system has " + std::to_string(system.size()));
  const double nb = std::max(system.b.norm(), 1.0);
  return (system.A * coeffs - system.b).norm() / nb;
}

}  // namespace tdg
