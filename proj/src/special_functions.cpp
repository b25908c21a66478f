#include "tdg/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace tdg {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kSeriesLimit = 8.0;
constexpr double kAsymptoticLimit = 25.0;

double j_series(double nu, double x) {
  const double half = 0.5 * x;
  const double h2 = half * half;
  double term = std::pow(half, nu) / std::tgamma(nu + 1.0);
  double sum = term;
  for (int m = 1; m < 1000; ++m) {
    term *= -h2 / (m * (m + nu));
    sum += term;
    if (m > h2 && std::abs(term) < 1e-18) break;
  }
  return sum;
}

struct AsymptoticPair {
  double j;
  double y;
};

AsymptoticPair hankel_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag >= last) break;  // asymptotic series started to diverge
    last = mag;
    if (k % 2 == 1)
      q += ((k / 2) % 2 == 0 ? term : -term);
    else
      p += ((k / 2) % 2 == 0 ? term : -term);
    if (mag < 1e-18) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double f = std::sqrt(2.0 / (kPi * x));
  return {f * (p * std::cos(chi) - q * std::sin(chi)),
          f * (p * std::sin(chi) + q * std::cos(chi))};
}

// J_{nu+m}(x), m = 0..count-1, by backward recurrence normalized with
// (x/2)^nu = sum_k (nu+2k) Gamma(nu+k)/k! J_{nu+2k}(x).
std::vector<double> j_sequence(double nu, double x, int count) {
  const int start =
      std::max(count + 20, static_cast<int>(std::ceil(1.2 * x)) + 40) | 1;
  std::vector<double> f(start + 2, 0.0);
  f[start] = 1e-30;
  for (int m = start; m >= 1; --m) {
    f[m - 1] = 2.0 * (nu + m) / x * f[m] - f[m + 1];
    if (std::abs(f[m - 1]) > 1e250) {
      for (int i = m - 1; i <= start; ++i) f[i] *= 1e-250;
    }
  }
  double sum = std::tgamma(nu + 1.0) * f[0];
  double g = std::tgamma(nu + 1.0);  // Gamma(nu+k)/k! at k = 1
  for (int k = 1; 2 * k <= start; ++k) {
    sum += (nu + 2.0 * k) * g * f[2 * k];
    g *= (nu + k) / (k + 1.0);
  }
  const double scale = std::pow(0.5 * x, nu) / sum;
  std::vector<double> out(count);
  for (int m = 0; m < count; ++m) out[m] = f[m] * scale;
  return out;
}

struct YPair {
  double y0;
  double y1;
};

// Neumann series for Y0 and its derivative (Y1 = -Y0'), built from J_n.
YPair y_neumann(double x) {
  const int count = static_cast<int>(std::ceil(1.2 * x)) + 40;
  const std::vector<double> j = j_sequence(0.0, x, count + 2);
  const double lg = std::log(0.5 * x) + kEulerGamma;
  double s = 0.0;
  double ds = 0.0;
  for (int k = 1; 2 * k + 1 < static_cast<int>(j.size()); ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s += sign * j[2 * k] / k;
    ds += sign * 0.5 * (j[2 * k - 1] - j[2 * k + 1]) / k;
  }
  const double y0 = 2.0 / kPi * (lg * j[0] - 2.0 * s);
  const double dy0 = 2.0 / kPi * (j[0] / x - lg * j[1] - 2.0 * ds);
  return {y0, -dy0};
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0)) throw DomainError(std::string(name) + " requires x > 0");
}

}  // namespace

double bessel_j(double nu, double x) {
  if (nu < 0.0) throw DomainError("bessel_j requires order >= 0");
  if (x < 0.0) throw DomainError("bessel_j requires x >= 0");
  if (x <= kSeriesLimit) return j_series(nu, x);
  if (x >= kAsymptoticLimit) return hankel_asymptotic(nu, x).j;
  return j_sequence(nu, x, 1)[0];
}

double bessel_y0(double x) {
  require_positive(x, "bessel_y0");
  if (x >= kAsymptoticLimit) return hankel_asymptotic(0.0, x).y;
  return y_neumann(x).y0;
}

double bessel_y1(double x) {
  require_positive(x, "bessel_y1");
  if (x >= kAsymptoticLimit) return hankel_asymptotic(1.0, x).y;
  return y_neumann(x).y1;
}

Complex hankel1_0(double x) {
  require_positive(x, "hankel1_0");
  if (x >= kAsymptoticLimit) {
    const auto a = hankel_asymptotic(0.0, x);
    return {a.j, a.y};
  }
  return {bessel_j(0.0, x), y_neumann(x).y0};
}

Complex hankel1_1(double x) {
  require_positive(x, "hankel1_1");
  if (x >= kAsymptoticLimit) {
    const auto a = hankel_asymptotic(1.0, x);
    return {a.j, a.y};
  }
  return {bessel_j(1.0, x), y_neumann(x).y1};
}

Complex eval_special(BesselKind kind, double order, double x) {
  switch (kind) {
    case BesselKind::J:
      return bessel_j(order, x);
    case BesselKind::Y:
      if (order == 0.0) return bessel_y0(x);
      if (order == 1.0) return bessel_y1(x);
      break;
    case BesselKind::H1:
      if (order == 0.0) return hankel1_0(x);
      if (order == 1.0) return hankel1_1(x);
      break;
  }
  throw DomainError("Y and H1 are only available for orders 0 and 1");
}

}  // namespace tdg
