#include "tdg/estimator.hpp"

#include "tdg/parallel.hpp"

namespace tdg {

namespace {

const Complex kI(0.0, 1.0);

// facet integrals shared by the adjacent elements
struct FacetIntegrals {
  double jump_u = 0.0;      // int |u_a - u_b|^2
  double jump_gradu = 0.0;  // int |du_a/dn - du_b/dn|^2
  double boundary = 0.0;    // Robin or Dirichlet residual
};

FacetIntegrals integrate_facet(const DiscreteSolution& sol, const Facet& f,
                               const ProblemSpec& problem) {
  const Mesh& mesh = *sol.mesh;
  const QuadratureRule rule = facet_rule(mesh, f);
  const ElementBasis& ba = sol.bases[f.side_a];
  const Eigen::MatrixXcd va = ba.values(rule.points);
  const Eigen::VectorXcd ua = va * sol.local(f.side_a);
  // normal derivative: sum_l c_l i k d_l.n phi_l
  const Eigen::VectorXcd dna = ba.dirs * f.normal;
  const Eigen::VectorXcd ga = va * (kI * ba.k * dna.cwiseProduct(sol.local(f.side_a)));

  FacetIntegrals out;
  if (f.kind == FacetKind::interior) {
    const ElementBasis& bb = sol.bases[f.side_b];
    const Eigen::MatrixXcd vb = bb.values(rule.points);
    const Eigen::VectorXcd ub = vb * sol.local(f.side_b);
    const Eigen::VectorXcd dnb = bb.dirs * f.normal;
    const Eigen::VectorXcd gb = vb * (kI * bb.k * dnb.cwiseProduct(sol.local(f.side_b)));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto i = static_cast<Eigen::Index>(q);
      out.jump_u += rule.weights[q] * std::norm(ua[i] - ub[i]);
      out.jump_gradu += rule.weights[q] * std::norm(ga[i] - gb[i]);
    }
    return out;
  }
  const double k = ba.k;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto i = static_cast<Eigen::Index>(q);
    const Complex g = boundary_data(problem, rule.points[q], f.normal, f.kind, k);
    const Complex r = f.kind == FacetKind::robin
                          ? g - ga[i] - kI * k * problem.vartheta * ua[i]
                          : g - ua[i];
    out.boundary += rule.weights[q] * std::norm(r);
  }
  return out;
}

void accumulate(IndicatorRecord& rec, const Mesh& mesh, const Facet& f,
                const FacetIntegrals& in, const PenaltyParams& prm) {
  const double h = mesh.diameter(rec.id);
  const double q = mesh.element(rec.id).q;
  const double w1 = h / q;
  const double w3 = w1 * w1 * w1;
  switch (f.kind) {
    case FacetKind::interior:
      rec.jump_u2 += prm.alpha * w1 * in.jump_u;
      rec.jump_gradu2 += prm.beta * w3 * in.jump_gradu;
      break;
    case FacetKind::robin:
      rec.robin2 += prm.delta * w3 * in.boundary;
      break;
    case FacetKind::dirichlet:
      rec.dirichlet2 += prm.alpha * w1 * in.boundary;
      break;
  }
}

}  // namespace

std::vector<IndicatorRecord> compute_indicators(const DiscreteSolution& sol,
                                                const ProblemSpec& problem,
                                                const PenaltyParams& params) {
  const Mesh& mesh = *sol.mesh;
  const std::vector<Facet> facets = skeleton_facets(mesh);
  std::vector<FacetIntegrals> slots(facets.size());
  parallel_for(facets.size(),
               [&](std::size_t i) { slots[i] = integrate_facet(sol, facets[i], problem); });

  std::vector<std::size_t> row(mesh.id_count(), 0);
  std::vector<IndicatorRecord> recs(mesh.leaf_count());
  for (std::size_t i = 0; i < mesh.leaves().size(); ++i) {
    row[mesh.leaves()[i]] = i;
    recs[i].id = mesh.leaves()[i];
  }
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const Facet& f = facets[i];
    accumulate(recs[row[f.side_a]], mesh, f, slots[i], params);
    if (f.side_b != kNoElement) accumulate(recs[row[f.side_b]], mesh, f, slots[i], params);
  }
  return recs;
}

IndicatorRecord element_indicator(ElementId id, const DiscreteSolution& sol,
                                  const ProblemSpec& problem, const PenaltyParams& params) {
  const Mesh& mesh = *sol.mesh;
  IndicatorRecord rec;
  rec.id = id;
  for (const Facet& f : skeleton_facets(mesh)) {
    if (f.side_a != id && f.side_b != id) continue;
    accumulate(rec, mesh, f, integrate_facet(sol, f, problem), params);
  }
  return rec;
}

double global_estimate(const std::vector<IndicatorRecord>& records, EstimateForm form) {
  double s = 0.0;
  for (const auto& r : records) s += r.eta2();
  return form == EstimateForm::root ? std::sqrt(s) : s * s;
}

Effectivities effectivities(const std::vector<IndicatorRecord>& records, double err,
                            EstimateForm form) {
  double ju = 0.0, jg = 0.0, rb = 0.0;
  for (const auto& r : records) {
    ju += r.jump_u2;
    jg += r.jump_gradu2;
    rb += r.robin2;
  }
  Effectivities e;
  if (!(err > 0.0)) {
    const double inf = std::numeric_limits<double>::infinity();
    e = {inf, inf, inf, inf, true};
    return e;
  }
  e.total = global_estimate(records, form) / err;
  e.jump_u = std::sqrt(ju) / err;
  e.jump_gradu = std::sqrt(jg) / err;
  e.robin = std::sqrt(rb) / err;
  return e;
}

Effectivities effectivities(const std::vector<IndicatorRecord>& records,
                            const DiscreteSolution& solution, const ProblemSpec& problem,
                            EstimateForm form) {
  return effectivities(records, l2_error(solution, problem).error, form);
}

}  // namespace tdg
