#pragma once

#include "bmv/matrix_core.hpp"
#include "high_precision.hpp"

#include <complex>
#include <vector>

namespace bmv::detail {

// P(lambda, zeta) = det(lambda I - A + zeta diag(b)) as an explicit bivariate
// polynomial in extended precision, for polishing branch values.
class PencilPolynomial {
 public:
  PencilPolynomial(const ReducedPair& pair, mpfr_prec_t bits);

  int degree() const noexcept { return n_; }
  mpfr_prec_t bits() const noexcept { return bits_; }

  // out[p] = coefficient of lambda^p at the given zeta (out resized to n+1).
  void coefficients_at(const hp::Complex& zeta, std::vector<hp::Complex>& out, hp::Scratch& s) const;

  // Newton iteration on the univariate polynomial `coeffs` until the step
  // falls below the working precision. Returns false if it did not settle.
  bool polish(const std::vector<hp::Complex>& coeffs, hp::Complex& lambda, hp::Scratch& s) const;

  // |P(lambda, zeta)| evaluated in extended precision.
  double abs_value(std::complex<double> lambda, std::complex<double> zeta) const;

 private:
  int n_;
  mpfr_prec_t bits_;
  std::vector<hp::Complex> coeff_;  // coeff_[p * (n + 1) + q] multiplies lambda^p zeta^q
};

}  // namespace bmv::detail
