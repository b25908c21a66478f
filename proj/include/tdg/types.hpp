#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace tdg {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using ElementId = std::int32_t;

inline constexpr ElementId kNoElement = -1;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (e.g. Y0 at x = 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// No 3D direction set is available for the requested number of plane waves.
class UnsupportedDegreeError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

/// Requested quantity needs an exact solution the problem does not provide.
class UnsupportedProblemError : public Error {
 public:
  using Error::Error;
};

/// Raised by the direct solver; carries the (0-based) pivot that vanished.
class SingularSystemError : public Error {
 public:
  SingularSystemError(const std::string& what, std::int64_t pivot)
      : Error(what), pivot_(pivot) {}
  std::int64_t pivot() const noexcept { return pivot_; }

 private:
  std::int64_t pivot_;
};

/// Axis-aligned box; in 2D the z extent is ignored.  Facets are boxes with
/// zero extent along their normal axis.
struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  int dim = 2;

  Vec3 center() const { return 0.5 * (lo + hi); }
  double extent(int axis) const { return hi[axis] - lo[axis]; }

  double diameter() const {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += extent(a) * extent(a);
    return std::sqrt(s);
  }

  /// Lebesgue measure over the axes with nonzero extent.
  double measure() const {
    double m = 1.0;
    for (int a = 0; a < dim; ++a)
      if (extent(a) > 0.0) m *= extent(a);
    return m;
  }
};

}  // namespace tdg
