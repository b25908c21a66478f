#pragma once

// Extended-precision Maclaurin series for J_nu, Y_0 and Y_1, used as an
// independent reference for the double-precision evaluators.

#include <mpfr.h>

namespace oracle {

inline constexpr mpfr_prec_t kPrec = 1536;

class Real {
 public:
  Real() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
  explicit Real(double d) { mpfr_init2(v_, kPrec); mpfr_set_d(v_, d, MPFR_RNDN); }
  Real(const Real& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real& operator=(const Real& o) { mpfr_set(v_, o.v_, MPFR_RNDN); return *this; }
  ~Real() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

// sum_m (-1)^m (x/2)^(2m+nu) / (m! Gamma(m+nu+1))
inline double bessel_j(double nu, double x) {
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  Real half_x(x), q, term, sum, tmp, nuR(nu);
  mpfr_div_ui(half_x.get(), half_x.get(), 2, MPFR_RNDN);
  mpfr_sqr(q.get(), half_x.get(), MPFR_RNDN);  // (x/2)^2
  // term_0 = (x/2)^nu / Gamma(nu+1)
  mpfr_pow(term.get(), half_x.get(), nuR.get(), MPFR_RNDN);
  mpfr_add_ui(tmp.get(), nuR.get(), 1, MPFR_RNDN);
  mpfr_gamma(tmp.get(), tmp.get(), MPFR_RNDN);
  mpfr_div(term.get(), term.get(), tmp.get(), MPFR_RNDN);
  mpfr_set(sum.get(), term.get(), MPFR_RNDN);
  const int terms = 60 + static_cast<int>(3.0 * x);
  for (int m = 1; m < terms; ++m) {
    // term_m = -term_{m-1} q / (m (m + nu))
    mpfr_mul(term.get(), term.get(), q.get(), MPFR_RNDN);
    mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(m), MPFR_RNDN);
    mpfr_add_ui(tmp.get(), nuR.get(), static_cast<unsigned long>(m), MPFR_RNDN);
    mpfr_div(term.get(), term.get(), tmp.get(), MPFR_RNDN);
    mpfr_neg(term.get(), term.get(), MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
  }
  return sum.to_double();
}

namespace detail {

// J_n(x) for n = 0, 1 at full precision
inline Real bessel_j_int(int n, const Real& x) {
  Real out;
  if (n == 0) mpfr_j0(out.get(), x.get(), MPFR_RNDN);
  else mpfr_j1(out.get(), x.get(), MPFR_RNDN);
  return out;
}

}  // namespace detail

// Y_0(x) = (2/pi)(ln(x/2) + gamma) J_0(x) + (2/pi) sum_{m>=1} (-1)^(m+1) H_m (x^2/4)^m / (m!)^2
// Y_1(x) = (2/pi) ln(x/2) J_1(x) - 2/(pi x)
//          - (1/pi) sum_{m>=0} (-1)^m (psi(m+1) + psi(m+2)) (x/2)^(2m+1) / (m! (m+1)!)
inline double bessel_y(int n, double xd) {
  Real x(xd), half_x(xd), q, pi, euler, lg, term, sum, harm, tmp, psi_a, psi_b;
  mpfr_div_ui(half_x.get(), half_x.get(), 2, MPFR_RNDN);
  mpfr_sqr(q.get(), half_x.get(), MPFR_RNDN);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  mpfr_const_euler(euler.get(), MPFR_RNDN);
  mpfr_log(lg.get(), half_x.get(), MPFR_RNDN);
  const int terms = 60 + static_cast<int>(3.0 * xd);
  if (n == 0) {
    // series part
    mpfr_set_ui(term.get(), 1, MPFR_RNDN);
    for (int m = 1; m < terms; ++m) {
      mpfr_mul(term.get(), term.get(), q.get(), MPFR_RNDN);
      mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(m) * m, MPFR_RNDN);
      mpfr_neg(term.get(), term.get(), MPFR_RNDN);  // now (-1)^m q^m/(m!)^2
      mpfr_set_ui(tmp.get(), 1, MPFR_RNDN);
      mpfr_div_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(m), MPFR_RNDN);
      mpfr_add(harm.get(), harm.get(), tmp.get(), MPFR_RNDN);
      mpfr_mul(tmp.get(), term.get(), harm.get(), MPFR_RNDN);
      mpfr_sub(sum.get(), sum.get(), tmp.get(), MPFR_RNDN);  // (-1)^(m+1) H_m ...
    }
    Real j0 = detail::bessel_j_int(0, x);
    mpfr_add(tmp.get(), lg.get(), euler.get(), MPFR_RNDN);
    mpfr_mul(tmp.get(), tmp.get(), j0.get(), MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), tmp.get(), MPFR_RNDN);
    mpfr_mul_ui(sum.get(), sum.get(), 2, MPFR_RNDN);
    mpfr_div(sum.get(), sum.get(), pi.get(), MPFR_RNDN);
    return sum.to_double();
  }
  // psi(1) = -gamma, psi(2) = 1 - gamma
  mpfr_neg(psi_a.get(), euler.get(), MPFR_RNDN);
  mpfr_ui_sub(psi_b.get(), 1, euler.get(), MPFR_RNDN);
  mpfr_set(term.get(), half_x.get(), MPFR_RNDN);  // (x/2)^1 / (0! 1!)
  for (int m = 0; m < terms; ++m) {
    if (m > 0) {
      mpfr_mul(term.get(), term.get(), q.get(), MPFR_RNDN);
      mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(m) * (m + 1), MPFR_RNDN);
      mpfr_neg(term.get(), term.get(), MPFR_RNDN);
      // psi(m+1) = psi(m) + 1/m, psi(m+2) = psi(m+1) + 1/(m+1)
      mpfr_set_ui(tmp.get(), 1, MPFR_RNDN);
      mpfr_div_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(m), MPFR_RNDN);
      mpfr_add(psi_a.get(), psi_a.get(), tmp.get(), MPFR_RNDN);
      mpfr_set_ui(tmp.get(), 1, MPFR_RNDN);
      mpfr_div_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(m) + 1, MPFR_RNDN);
      mpfr_add(psi_b.get(), psi_b.get(), tmp.get(), MPFR_RNDN);
    }
    mpfr_add(tmp.get(), psi_a.get(), psi_b.get(), MPFR_RNDN);
    mpfr_mul(tmp.get(), tmp.get(), term.get(), MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), tmp.get(), MPFR_RNDN);
  }
  // sum now holds sum_m (-1)^m (psi+psi) (x/2)^(2m+1)/(m!(m+1)!)
  mpfr_div(sum.get(), sum.get(), pi.get(), MPFR_RNDN);
  Real j1 = detail::bessel_j_int(1, x), out;
  mpfr_mul(out.get(), lg.get(), j1.get(), MPFR_RNDN);
  mpfr_mul_ui(out.get(), out.get(), 2, MPFR_RNDN);
  mpfr_div(out.get(), out.get(), pi.get(), MPFR_RNDN);
  mpfr_sub(out.get(), out.get(), sum.get(), MPFR_RNDN);
  mpfr_ui_div(tmp.get(), 2, x.get(), MPFR_RNDN);
  mpfr_div(tmp.get(), tmp.get(), pi.get(), MPFR_RNDN);
  mpfr_sub(out.get(), out.get(), tmp.get(), MPFR_RNDN);
  return out.to_double();
}

}  // namespace oracle
