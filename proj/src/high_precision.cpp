#include "high_precision.hpp"

#include <cmath>

namespace bmv::hp {

void div(Complex& out, const Complex& a, const Complex& b, Scratch& s) {
  // (a.re + i a.im)(b.re - i b.im) / |b|^2
  mpfr_sqr(s.t0.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_sqr(s.t1.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_add(s.t3.raw(), s.t0.raw(), s.t1.raw(), MPFR_RNDN);

  mpfr_mul(s.t0.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_mul(s.t1.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_add(s.t0.raw(), s.t0.raw(), s.t1.raw(), MPFR_RNDN);

  mpfr_mul(s.t1.raw(), a.im.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_mul(s.t2.raw(), a.re.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_sub(s.t1.raw(), s.t1.raw(), s.t2.raw(), MPFR_RNDN);

  mpfr_div(out.re.raw(), s.t0.raw(), s.t3.raw(), MPFR_RNDN);
  mpfr_div(out.im.raw(), s.t1.raw(), s.t3.raw(), MPFR_RNDN);
}

void exp(Complex& out, const Complex& z, Scratch& s) {
  mpfr_sin_cos(out.im.raw(), out.re.raw(), z.im.raw(), MPFR_RNDN);
  mpfr_exp(s.t0.raw(), z.re.raw(), MPFR_RNDN);
  mpfr_mul(out.re.raw(), out.re.raw(), s.t0.raw(), MPFR_RNDN);
  mpfr_mul(out.im.raw(), out.im.raw(), s.t0.raw(), MPFR_RNDN);
}

double abs(const Complex& z, Scratch& s) {
  mpfr_hypot(s.t0.raw(), z.re.raw(), z.im.raw(), MPFR_RNDN);
  return s.t0.to_double();
}

double log_abs(const Complex& z, Scratch& s) {
  mpfr_hypot(s.t0.raw(), z.re.raw(), z.im.raw(), MPFR_RNDN);
  if (mpfr_zero_p(s.t0.raw())) return -INFINITY;
  mpfr_log(s.t0.raw(), s.t0.raw(), MPFR_RNDN);
  return s.t0.to_double();
}

}  // namespace bmv::hp
