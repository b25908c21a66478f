#include "tdg/directional.hpp"

#include <algorithm>
#include <numeric>

#include "tdg/basis.hpp"
#include "tdg/parallel.hpp"

namespace tdg {

namespace {

const Complex kI(0.0, 1.0);

void fix_sign(Vec3& v) {
  for (int a = 0; a < 3; ++a) {
    if (v[a] != 0.0) {
      if (v[a] < 0.0) v = -v;
      return;
    }
  }
}

SymEigen sorted(std::vector<double> vals, std::vector<Vec3> vecs) {
  std::vector<std::size_t> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(vals[a]) > std::abs(vals[b]);
  });
  SymEigen out;
  for (std::size_t i : order) {
    Vec3 v = vecs[i].normalized();
    fix_sign(v);
    out.values.push_back(vals[i]);
    out.vectors.push_back(v);
  }
  return out;
}

SymEigen eigen2(double a, double b, double c) {
  // [[a, b], [b, c]]
  if (b == 0.0) return sorted({a, c}, {Vec3(1, 0, 0), Vec3(0, 1, 0)});
  const double mean = 0.5 * (a + c);
  const double rad = std::hypot(0.5 * (a - c), b);
  const double l1 = mean + rad;
  const double l2 = mean - rad;
  // eigenvector of l1; pick the better conditioned of the two row forms
  Vec3 v1 = (a >= c) ? Vec3(l1 - c, b, 0) : Vec3(b, l1 - a, 0);
  v1.normalize();
  const Vec3 v2(-v1[1], v1[0], 0);
  return sorted({l1, l2}, {v1, v2});
}

SymEigen eigen3(Eigen::Matrix3d a) {
  Eigen::Matrix3d v = Eigen::Matrix3d::Identity();
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double scale = a.squaredNorm();
    if (off <= 1e-32 * scale || off == 0.0) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        Eigen::Matrix3d j = Eigen::Matrix3d::Identity();
        j(p, p) = c;
        j(q, q) = c;
        j(p, q) = s;
        j(q, p) = -s;
        a = j.transpose() * a * j;
        a(p, q) = a(q, p) = 0.0;
        v = v * j;
      }
    }
  }
  return sorted({a(0, 0), a(1, 1), a(2, 2)}, {v.col(0), v.col(1), v.col(2)});
}

}  // namespace

SymEigen symmetric_eigen(const Eigen::Matrix3d& h, int dim) {
  const Eigen::Matrix3d s = 0.5 * (h + h.transpose());
  if (dim == 2) return eigen2(s(0, 0), s(0, 1), s(1, 1));
  return eigen3(s);
}

EigenPairs hessian_eigenpairs(const DiscreteSolution& sol, ElementId id) {
  const ElementBasis& b = sol.bases[id];
  const auto c = sol.local(id);
  Eigen::Matrix3d hre = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d him = Eigen::Matrix3d::Zero();
  const double k2 = b.k * b.k;
  // at the centroid every exponential equals one
  for (Eigen::Index l = 0; l < b.size(); ++l) {
    const Vec3 d = b.dirs.row(l).transpose();
    const Eigen::Matrix3d dd = -k2 * d * d.transpose();
    hre += c[l].real() * dd;
    him += c[l].imag() * dd;
  }
  const int dim = sol.mesh->dim();
  return {symmetric_eigen(hre, dim), symmetric_eigen(him, dim)};
}

std::optional<Vec3> potential_direction(const EigenPairs& pairs, double lambda) {
  const double l1 = std::abs(pairs.re.values.at(0)), l2 = std::abs(pairs.re.values.at(1));
  const double m1 = std::abs(pairs.im.values.at(0)), m2 = std::abs(pairs.im.values.at(1));
  const Vec3& v1 = pairs.re.vectors[0];
  const Vec3& w1 = pairs.im.vectors[0];
  // a vanishing Hessian carries no direction information
  if (l1 == 0.0 && m1 == 0.0) return std::nullopt;

  if (l1 >= lambda * l2) {
    if (m1 >= lambda * m2) {
      if (l1 >= lambda * m1) return v1;
      if (m1 >= lambda * l1) return w1;
      const Vec3 s = v1 + w1;
      if (s.norm() < 1e-8) return std::nullopt;
      return Vec3(s / s.norm());
    }
    if (l1 >= lambda * m1) return v1;
    return std::nullopt;
  }
  if (m1 >= lambda * m2 && m1 >= lambda * l1) return w1;
  return std::nullopt;
}

double impedance_ratio(const DiscreteSolution& sol, ElementId id, const Vec3& d,
                       double delta_ball) {
  const ElementBasis& b = sol.bases[id];
  const Vec3 x = b.center + delta_ball * d;
  const Complex u = sol.value(id, x);
  const CVec3 g = sol.gradient(id, x);
  const Complex gd = g.cwiseProduct(d.cast<Complex>()).sum();
  const Complex iku = kI * b.k * u;
  if (std::abs(iku) == 0.0) return 1.0;
  return ((gd + iku) / iku).real();
}

Vec3 orient_direction(const DiscreteSolution& sol, ElementId id, const Vec3& d,
                      double delta_ball) {
  const double k = sol.bases[id].k;
  const double threshold = std::cos(k * delta_ball);
  return impedance_ratio(sol, id, d, delta_ball) >= threshold ? d : Vec3(-d);
}

std::optional<Vec3> dominant_direction(const DiscreteSolution& sol, ElementId id,
                                       const DirectionalParams& params) {
  const auto cand = potential_direction(hessian_eigenpairs(sol, id), params.lambda);
  if (!cand) return std::nullopt;
  return orient_direction(sol, id, *cand, params.delta_ball);
}

int update_frames(Mesh& mesh, const DiscreteSolution& sol, const std::vector<ElementId>& targets,
                  const DirectionalParams& params) {
  std::vector<std::optional<Vec3>> dirs(targets.size());
  parallel_for(targets.size(),
               [&](std::size_t i) { dirs[i] = dominant_direction(sol, targets[i], params); });
  int changed = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!dirs[i]) continue;
    Element& e = mesh.element(targets[i]);
    const DirectionFrame f = frame_from_direction(*dirs[i], mesh.dim());
    if (!(f == e.frame)) ++changed;
    e.frame = f;
  }
  return changed;
}

std::vector<ElementId> policy_targets(const Mesh& mesh, DirectionPolicy policy,
                                      const std::vector<ElementId>& marked,
                                      const std::vector<ElementId>& p_refined) {
  std::vector<ElementId> out;
  switch (policy) {
    case DirectionPolicy::none: break;
    case DirectionPolicy::marked_p: out = p_refined; break;
    case DirectionPolicy::marked_all: out = marked; break;
    case DirectionPolicy::all: out = mesh.leaves(); break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

int apply_directional_adaptivity(Mesh& mesh, const DiscreteSolution& solution,
                                 DirectionPolicy policy, const std::vector<ElementId>& marked,
                                 const std::vector<ElementId>& p_refined,
                                 const DirectionalParams& params) {
  return update_frames(mesh, solution, policy_targets(mesh, policy, marked, p_refined), params);
}

}  // namespace tdg
