#include "tdg/problems.hpp"

#include "tdg/parallel.hpp"
#include "tdg/quadrature.hpp"
#include "tdg/solution.hpp"
#include "tdg/special_functions.hpp"

namespace tdg {

ProblemSpec ProblemSpec::hankel(double k) {
  ProblemSpec p;
  p.kind = ProblemKind::hankel;
  p.domain = DomainSpec::uniform(DomainKind::unit_square, BoundaryCondition::robin);
  p.k = k;
  p.omega = k;
  return p;
}

ProblemSpec ProblemSpec::lshape_singular(double k) {
  ProblemSpec p;
  p.kind = ProblemKind::lshape_singular;
  p.domain = DomainSpec::uniform(DomainKind::l_shape, BoundaryCondition::robin);
  p.k = k;
  p.omega = k;
  return p;
}

ProblemSpec ProblemSpec::transmission(double omega, double n1, double n2,
                                      double theta_i) {
  ProblemSpec p;
  p.kind = ProblemKind::transmission;
  p.domain = DomainSpec::uniform(DomainKind::square2, BoundaryCondition::dirichlet);
  p.omega = omega;
  p.n1 = n1;
  p.n2 = n2;
  p.theta_i = theta_i;
  p.k = omega * n1;
  return p;
}

ProblemSpec ProblemSpec::plane_wave(double k, const Vec3& d, DomainKind domain,
                                    const Vec3& origin) {
  ProblemSpec p;
  p.kind = ProblemKind::plane_wave;
  p.domain = DomainSpec::uniform(domain, BoundaryCondition::robin);
  p.k = k;
  p.omega = k;
  p.direction = d.normalized();
  p.origin = origin;
  return p;
}

double ProblemSpec::wavenumber(const Vec3& x) const {
  if (kind == ProblemKind::transmission) return x[1] <= 0.0 ? omega * n1 : omega * n2;
  return k;
}

std::string ProblemSpec::name() const {
  switch (kind) {
    case ProblemKind::hankel: return "hankel";
    case ProblemKind::lshape_singular: return "lshape_singular";
    case ProblemKind::transmission: return "transmission";
    case ProblemKind::plane_wave: return "plane_wave";
  }
  return "unknown";
}

TransmissionCoefficients transmission_coefficients(const ProblemSpec& p) {
  TransmissionCoefficients c;
  c.k1 = p.omega * p.n1;
  c.k2 = p.omega * p.n2;
  const double cs = std::cos(p.theta_i);
  const double sn = std::sin(p.theta_i);
  c.K1 = c.k1 * cs;
  // K1^2 + K2^2 = k2^2 above the interface; branch with Im K2 >= 0 so the
  // evanescent field decays upwards
  const Complex rad(c.k2 * c.k2 - c.K1 * c.K1, 0.0);
  c.K2 = std::sqrt(rad);
  if (c.K2.imag() < 0.0) c.K2 = -c.K2;
  const double ks = c.k1 * sn;
  c.R = -(c.K2 - ks) / (c.K2 + ks);
  c.T = 1.0 + c.R;
  return c;
}

namespace {

const Complex kI(0.0, 1.0);

Complex expi(double a) { return Complex(std::cos(a), std::sin(a)); }
Complex expi(Complex a) { return std::exp(kI * a); }

}  // namespace

PointValue exact_solution(const ProblemSpec& p, const Vec3& x, bool want_gradient) {
  PointValue out;
  switch (p.kind) {
    case ProblemKind::hankel: {
      const Vec3 rel = x - p.source;
      const double r = std::hypot(rel[0], rel[1]);
      if (r == 0.0) throw DomainError("Hankel solution is singular at its source point");
      out.value = hankel1_0(p.k * r);
      if (want_gradient) {
        // d/dr H0(kr) = -k H1(kr)
        const Complex dr = -p.k * hankel1_1(p.k * r);
        out.gradient = CVec3(dr * rel[0] / r, dr * rel[1] / r, 0.0);
      }
      break;
    }
    case ProblemKind::lshape_singular: {
      constexpr double nu = 2.0 / 3.0;
      const double r = std::hypot(x[0], x[1]);
      double th = std::atan2(x[1], x[0]);
      if (th < 0.0) th += 2.0 * kPi;
      const double kr = p.k * r;
      const double jv = bessel_j(nu, kr);
      out.value = jv * std::sin(nu * th);
      if (want_gradient) {
        if (r == 0.0)
          throw DomainError("gradient of the singular solution is unbounded at the origin");
        const double djv = nu / kr * jv - bessel_j(nu + 1.0, kr);
        const double ur = p.k * djv * std::sin(nu * th);
        const double ut = jv * nu * std::cos(nu * th) / r;  // (1/r) du/dtheta
        const double c = x[0] / r, s = x[1] / r;
        out.gradient = CVec3(ur * c - ut * s, ur * s + ut * c, 0.0);
      }
      break;
    }
    case ProblemKind::transmission: {
      const TransmissionCoefficients c = transmission_coefficients(p);
      const double cs = std::cos(p.theta_i), sn = std::sin(p.theta_i);
      if (x[1] > 0.0) {
        const Complex e = c.T * expi(c.K1 * x[0] + c.K2 * x[1]);
        out.value = e;
        if (want_gradient) out.gradient = CVec3(kI * c.K1 * e, kI * c.K2 * e, 0.0);
      } else {
        const Complex inc = expi(c.k1 * (x[0] * cs + x[1] * sn));
        const Complex ref = c.R * expi(c.k1 * (x[0] * cs - x[1] * sn));
        out.value = inc + ref;
        if (want_gradient)
          out.gradient = CVec3(kI * c.k1 * cs * (inc + ref), kI * c.k1 * sn * (inc - ref), 0.0);
      }
      break;
    }
    case ProblemKind::plane_wave: {
      const Complex e = expi(p.k * p.direction.dot(x - p.origin));
      out.value = e;
      if (want_gradient) out.gradient = (kI * p.k * e) * p.direction.cast<Complex>();
      break;
    }
  }
  return out;
}

Complex boundary_data(const ProblemSpec& p, const Vec3& x, const Vec3& n,
                      FacetKind kind, double k) {
  if (kind == FacetKind::dirichlet) return exact_solution(p, x, false).value;
  if (kind != FacetKind::robin) throw AssemblyError("boundary data requested on an interior facet");
  const PointValue u = exact_solution(p, x, true);
  return u.gradient.cwiseProduct(n.cast<Complex>()).sum() + kI * k * p.vartheta * u.value;
}

L2Error l2_error(const DiscreteSolution& sol, const ProblemSpec& problem) {
  const Mesh& mesh = *sol.mesh;
  const auto& leaves = mesh.leaves();
  std::vector<std::pair<double, double>> slots(leaves.size());
  parallel_for(leaves.size(), [&](std::size_t i) {
    const ElementId id = leaves[i];
    const Element& e = mesh.element(id);
    const QuadratureRule rule = volume_rule(mesh.bbox(id), e.k, e.q);
    const Eigen::VectorXcd uh = sol.bases[id].values(rule.points) * sol.local(id);
    double err = 0.0, nrm = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Complex u = exact_solution(problem, rule.points[q], false).value;
      err += rule.weights[q] * std::norm(u - uh[static_cast<Eigen::Index>(q)]);
      nrm += rule.weights[q] * std::norm(u);
    }
    slots[i] = {err, nrm};
  });
  L2Error out;
  for (const auto& [err, nrm] : slots) {
    out.error += err;
    out.norm += nrm;
  }
  out.error = std::sqrt(out.error);
  out.norm = std::sqrt(out.norm);
  return out;
}

double relative_l2_error(const DiscreteSolution& sol, const ProblemSpec& problem) {
  return l2_error(sol, problem).relative();
}

}  // namespace tdg
