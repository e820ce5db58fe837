#pragma once

// Thin RAII layer over MPFR. Every value carries its own precision; there is
// no global default, so concurrent computations never interfere.

#include <mpfr.h>

#include <complex>
#include <utility>

namespace bmv::hp {

class Real {
 public:
  explicit Real(mpfr_prec_t bits = 64) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  Real(double value, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, value, MPFR_RNDN);
  }
  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr raw() noexcept { return v_; }
  mpfr_srcptr raw() const noexcept { return v_; }
  mpfr_prec_t bits() const noexcept { return mpfr_get_prec(v_); }
  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

struct Complex {
  Real re;
  Real im;

  explicit Complex(mpfr_prec_t bits = 64) : re(bits), im(bits) {}
  Complex(std::complex<double> z, mpfr_prec_t bits) : re(z.real(), bits), im(z.imag(), bits) {}

  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
  mpfr_prec_t bits() const noexcept { return re.bits(); }
};

// Scratch registers for the in-place kernels below; one per thread of work.
struct Scratch {
  Real t0, t1, t2, t3;
  explicit Scratch(mpfr_prec_t bits) : t0(bits), t1(bits), t2(bits), t3(bits) {}
};

inline void set(Complex& out, const Complex& z) {
  mpfr_set(out.re.raw(), z.re.raw(), MPFR_RNDN);
  mpfr_set(out.im.raw(), z.im.raw(), MPFR_RNDN);
}

inline void add(Complex& out, const Complex& a, const Complex& b) {
  mpfr_add(out.re.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_add(out.im.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
}

inline void sub(Complex& out, const Complex& a, const Complex& b) {
  mpfr_sub(out.re.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_sub(out.im.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
}

// out = a * b; out may alias a or b.
inline void mul(Complex& out, const Complex& a, const Complex& b, Scratch& s) {
  mpfr_mul(s.t0.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_mul(s.t1.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_mul(s.t2.raw(), a.re.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_mul(s.t3.raw(), a.im.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_sub(out.re.raw(), s.t0.raw(), s.t1.raw(), MPFR_RNDN);
  mpfr_add(out.im.raw(), s.t2.raw(), s.t3.raw(), MPFR_RNDN);
}

// acc += a * b; acc must not alias a or b.
inline void mul_add(Complex& acc, const Complex& a, const Complex& b, Scratch& s) {
  mpfr_mul(s.t0.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_add(acc.re.raw(), acc.re.raw(), s.t0.raw(), MPFR_RNDN);
  mpfr_mul(s.t0.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_sub(acc.re.raw(), acc.re.raw(), s.t0.raw(), MPFR_RNDN);
  mpfr_mul(s.t0.raw(), a.re.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_add(acc.im.raw(), acc.im.raw(), s.t0.raw(), MPFR_RNDN);
  mpfr_mul(s.t0.raw(), a.im.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_add(acc.im.raw(), acc.im.raw(), s.t0.raw(), MPFR_RNDN);
}

// out = a / b; out may alias a or b.
void div(Complex& out, const Complex& a, const Complex& b, Scratch& s);

// out = exp(z); out must not alias z.
void exp(Complex& out, const Complex& z, Scratch& s);

// |z| rounded to double.
double abs(const Complex& z, Scratch& s);

// log|z| as a double; -inf for zero.
double log_abs(const Complex& z, Scratch& s);

}  // namespace bmv::hp
