#include "tdg/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace tdg {

namespace {

constexpr int kCachedRules = 128;

// P_n(x) and P_{n-1}(x) by the three-term recurrence
std::pair<double, double> legendre_pair(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

GaussRule compute_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi's initial guess for the i-th largest root
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = legendre_pair(n, x);
      dp = (n == 1) ? 1.0 : n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre_pair(n, x);
    dp = (n == 1) ? 1.0 : n * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

// log of the Gauss remainder bound for f = e^{i kappa s} on [-1, 1]:
// kappa^{2n} 2^{2n+1} (n!)^4 / ((2n+1) ((2n)!)^3)
double log_remainder_bound(int n, double kappa) {
  const double nn = n;
  return 2.0 * nn * std::log(kappa) + (2.0 * nn + 1.0) * std::log(2.0) +
         4.0 * std::lgamma(nn + 1.0) - std::log(2.0 * nn + 1.0) -
         3.0 * std::lgamma(2.0 * nn + 1.0);
}

}  // namespace

const GaussRule& gauss_rule(int n) {
  if (n < 1) throw Error("gauss_rule requires n >= 1");
  static const std::array<GaussRule, kCachedRules + 1> table = [] {
    std::array<GaussRule, kCachedRules + 1> t;
    for (int i = 1; i <= kCachedRules; ++i) t[i] = compute_gauss_rule(i);
    return t;
  }();
  if (n <= kCachedRules) return table[n];
  thread_local GaussRule scratch;
  scratch = compute_gauss_rule(n);
  return scratch;
}

int oscillatory_order(double k, double length, int q) {
  const int floor_n = std::max(1, q + 2);
  const double kappa = std::abs(k) * length;  // half-length times 2k
  if (kappa <= 0.0) return floor_n;
  const double target = std::log(1e-16);
  int n = 1;
  while (n < 512 && log_remainder_bound(n, kappa) > target) ++n;
  return std::max(n, floor_n);
}

QuadratureRule tensor_rule(const Box& box, int n) {
  std::array<int, 3> axes{};
  int naxes = 0;
  for (int a = 0; a < box.dim; ++a)
    if (box.extent(a) > 0.0) axes[naxes++] = a;
  const GaussRule& g = gauss_rule(n);
  std::size_t total = 1;
  for (int i = 0; i < naxes; ++i) total *= static_cast<std::size_t>(n);
  QuadratureRule rule;
  rule.points.reserve(total);
  rule.weights.reserve(total);
  std::array<int, 3> idx{0, 0, 0};
  for (std::size_t c = 0; c < total; ++c) {
    Vec3 x = box.lo;
    if (box.dim == 2) x[2] = 0.0;
    double w = 1.0;
    for (int i = 0; i < naxes; ++i) {
      const int a = axes[i];
      const double half = 0.5 * box.extent(a);
      x[a] = box.lo[a] + half * (g.nodes[idx[i]] + 1.0);
      w *= half * g.weights[idx[i]];
    }
    rule.points.push_back(x);
    rule.weights.push_back(w);
    for (int i = 0; i < naxes; ++i) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
  }
  return rule;
}

QuadratureRule oscillatory_rule(const Box& box, double k, int q) {
  double longest = 0.0;
  for (int a = 0; a < box.dim; ++a) longest = std::max(longest, box.extent(a));
  return tensor_rule(box, oscillatory_order(k, longest, q));
}

}  // namespace tdg
