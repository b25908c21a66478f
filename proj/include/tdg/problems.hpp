#pragma once

#include <string>

#include "tdg/mesh.hpp"
#include "tdg/types.hpp"

namespace tdg {

enum class ProblemKind { hankel, lshape_singular, transmission, plane_wave };

/// Model problem with a known exact solution.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::hankel;
  DomainSpec domain;
  double k = 20.0;          // hankel, lshape_singular, plane_wave
  double omega = 11.0;      // transmission: k = omega n1 for y <= 0, omega n2 above
  double n1 = 2.0;
  double n2 = 1.0;
  double theta_i = 0.0;     // incidence angle (radians)
  Vec3 direction = Vec3(1, 0, 0);  // plane_wave
  Vec3 origin = Vec3::Zero();      // plane_wave phase origin
  Vec3 source = Vec3(-0.25, 0, 0); // hankel point source
  double vartheta = 1.0;

  /// H0(k |x - source|) on the unit square, Robin everywhere.
  static ProblemSpec hankel(double k);
  /// J_{2/3}(k r) sin(2 theta / 3) on the L-shape, Robin everywhere.
  static ProblemSpec lshape_singular(double k);
  /// Plane wave hitting the interface y = 0 of (-1,1)^2, Dirichlet data.
  static ProblemSpec transmission(double omega, double n1, double n2, double theta_i);
  /// exp(i k d . (x - origin)) on `domain`, Robin everywhere.
  static ProblemSpec plane_wave(double k, const Vec3& d, DomainKind domain,
                                const Vec3& origin = Vec3::Zero());

  int dim() const { return domain.dim(); }
  /// Material wavenumber at x (the interface y = 0 belongs to the lower half).
  double wavenumber(const Vec3& x) const;
  /// Wavenumber used on facets between elements with different k.
  double interface_wavenumber() const { return omega; }
  std::string name() const;
};

struct TransmissionCoefficients {
  double k1 = 0.0;
  double k2 = 0.0;
  double K1 = 0.0;
  Complex K2;
  Complex R;
  Complex T;
};

TransmissionCoefficients transmission_coefficients(const ProblemSpec& problem);

struct PointValue {
  Complex value;
  CVec3 gradient = CVec3::Zero();
};

/// u(x) and, if requested, grad u(x).
PointValue exact_solution(const ProblemSpec& problem, const Vec3& x,
                          bool want_gradient = true);

struct DiscreteSolution;

/// Robin data du/dn + i k vartheta u or Dirichlet data u at a boundary
/// point with outward normal n; k is the wavenumber of the adjacent element.
Complex boundary_data(const ProblemSpec& problem, const Vec3& x, const Vec3& n,
                      FacetKind kind, double k);

/// (sum_K int_K |u - u_hp|^2)^(1/2) and (sum_K int_K |u|^2)^(1/2), with the
/// element rules of volume_rule.
struct L2Error {
  double error = 0.0;
  double norm = 0.0;
  double relative() const { return norm > 0.0 ? error / norm : error; }
};

L2Error l2_error(const DiscreteSolution& solution, const ProblemSpec& problem);
double relative_l2_error(const DiscreteSolution& solution, const ProblemSpec& problem);

}  // namespace tdg
