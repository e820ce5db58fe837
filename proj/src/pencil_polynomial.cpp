#include "pencil_polynomial.hpp"

#include "bmv/error.hpp"

#include <cmath>
#include <utility>

namespace bmv::detail {

namespace {

// Determinant by Gaussian elimination with partial pivoting; destroys m.
void determinant(std::vector<hp::Complex>& m, int n, hp::Complex& det, hp::Scratch& s) {
  mpfr_set_ui(det.re.raw(), 1, MPFR_RNDN);
  mpfr_set_zero(det.im.raw(), 1);
  hp::Complex factor(det.bits()), tmp(det.bits());
  auto at = [&](int r, int c) -> hp::Complex& { return m[static_cast<std::size_t>(r) * n + c]; };
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = -1.0;
    for (int r = col; r < n; ++r) {
      const double mag = hp::abs(at(r, col), s);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best == 0.0) {
      mpfr_set_zero(det.re.raw(), 1);
      mpfr_set_zero(det.im.raw(), 1);
      return;
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(at(pivot, c), at(col, c));
      mpfr_neg(det.re.raw(), det.re.raw(), MPFR_RNDN);
      mpfr_neg(det.im.raw(), det.im.raw(), MPFR_RNDN);
    }
    hp::mul(det, det, at(col, col), s);
    for (int r = col + 1; r < n; ++r) {
      hp::div(factor, at(r, col), at(col, col), s);
      for (int c = col + 1; c < n; ++c) {
        hp::mul(tmp, factor, at(col, c), s);
        hp::sub(at(r, c), at(r, c), tmp);
      }
    }
  }
}

// e^{i angle} with angle = 2 pi k / m, computed in extended precision.
hp::Complex unit_root(long k, long m, mpfr_prec_t bits) {
  hp::Complex z(bits);
  hp::Real angle(bits);
  mpfr_const_pi(angle.raw(), MPFR_RNDN);
  mpfr_mul_si(angle.raw(), angle.raw(), 2 * k, MPFR_RNDN);
  mpfr_div_si(angle.raw(), angle.raw(), m, MPFR_RNDN);
  mpfr_sin_cos(z.im.raw(), z.re.raw(), angle.raw(), MPFR_RNDN);
  return z;
}

}  // namespace

PencilPolynomial::PencilPolynomial(const ReducedPair& pair, mpfr_prec_t bits)
    : n_(static_cast<int>(pair.n())), bits_(bits) {
  const int n = n_;
  const int m = n + 1;
  const mpfr_prec_t work = bits + 32;
  hp::Scratch s(work);

  // Values on the torus |lambda| = |zeta| = 1 at the (n+1)-th roots of unity.
  std::vector<hp::Complex> roots;
  for (int k = 0; k < m; ++k) roots.push_back(unit_root(k, m, work));
  std::vector<hp::Complex> values(static_cast<std::size_t>(m) * m, hp::Complex(work));
  std::vector<hp::Complex> mat(static_cast<std::size_t>(n) * n, hp::Complex(work));
  hp::Complex tmp(work);
  for (int u = 0; u < m; ++u) {
    for (int v = 0; v < m; ++v) {
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          auto& e = mat[static_cast<std::size_t>(r) * n + c];
          mpfr_set_d(e.re.raw(), -pair.a_red(r, c).real(), MPFR_RNDN);
          mpfr_set_d(e.im.raw(), -pair.a_red(r, c).imag(), MPFR_RNDN);
          if (r == c) {
            hp::add(e, e, roots[u]);
            mpfr_mul_d(tmp.re.raw(), roots[v].re.raw(), pair.b_eigs[r], MPFR_RNDN);
            mpfr_mul_d(tmp.im.raw(), roots[v].im.raw(), pair.b_eigs[r], MPFR_RNDN);
            hp::add(e, e, tmp);
          }
        }
      }
      determinant(mat, n, values[static_cast<std::size_t>(u) * m + v], s);
    }
  }

  // Inverse 2D DFT.
  coeff_.assign(static_cast<std::size_t>(m) * m, hp::Complex(bits));
  hp::Complex acc(work);
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      mpfr_set_zero(acc.re.raw(), 1);
      mpfr_set_zero(acc.im.raw(), 1);
      for (int u = 0; u < m; ++u) {
        for (int v = 0; v < m; ++v) {
          const int k = (m - (u * p + v * q) % m) % m;  // omega^{-(up + vq)}
          hp::mul_add(acc, values[static_cast<std::size_t>(u) * m + v], roots[k], s);
        }
      }
      mpfr_div_si(acc.re.raw(), acc.re.raw(), m * m, MPFR_RNDN);
      mpfr_div_si(acc.im.raw(), acc.im.raw(), m * m, MPFR_RNDN);
      hp::set(coeff_[static_cast<std::size_t>(p) * m + q], acc);
    }
  }
}

void PencilPolynomial::coefficients_at(const hp::Complex& zeta, std::vector<hp::Complex>& out,
                                       hp::Scratch& s) const {
  const int m = n_ + 1;
  if (out.size() != static_cast<std::size_t>(m)) out.assign(m, hp::Complex(bits_));
  for (int p = 0; p < m; ++p) {
    auto& c = out[p];
    hp::set(c, coeff_[static_cast<std::size_t>(p) * m + n_]);
    for (int q = n_ - 1; q >= 0; --q) {
      hp::mul(c, c, zeta, s);
      hp::add(c, c, coeff_[static_cast<std::size_t>(p) * m + q]);
    }
  }
}

bool PencilPolynomial::polish(const std::vector<hp::Complex>& coeffs, hp::Complex& lambda, hp::Scratch& s) const {
  hp::Complex value(bits_), deriv(bits_), step(bits_);
  hp::Real scale(bits_), mag(bits_), prev(bits_), tol(bits_);
  mpfr_set_inf(prev.raw(), 1);
  for (int iter = 0; iter < 40; ++iter) {
    hp::set(value, coeffs[n_]);
    mpfr_set_zero(deriv.re.raw(), 1);
    mpfr_set_zero(deriv.im.raw(), 1);
    for (int p = n_ - 1; p >= 0; --p) {
      hp::mul(deriv, deriv, lambda, s);
      hp::add(deriv, deriv, value);
      hp::mul(value, value, lambda, s);
      hp::add(value, value, coeffs[p]);
    }
    if (mpfr_zero_p(value.re.raw()) && mpfr_zero_p(value.im.raw())) return true;
    if (mpfr_zero_p(deriv.re.raw()) && mpfr_zero_p(deriv.im.raw())) return false;
    hp::div(step, value, deriv, s);
    hp::sub(lambda, lambda, step);

    mpfr_hypot(scale.raw(), lambda.re.raw(), lambda.im.raw(), MPFR_RNDN);
    if (mpfr_cmp_ui(scale.raw(), 1) < 0) mpfr_set_ui(scale.raw(), 1, MPFR_RNDN);
    mpfr_hypot(mag.raw(), step.re.raw(), step.im.raw(), MPFR_RNDN);

    // Full precision: |step| <= 2^{-(bits - 8)} max(1, |lambda|).
    mpfr_mul_2si(tol.raw(), scale.raw(), -(static_cast<long>(bits_) - 8), MPFR_RNDN);
    if (mpfr_cmp(mag.raw(), tol.raw()) <= 0) return true;

    // A root whose condition number costs a few bits stalls in rounding
    // noise instead; accept once the step stops halving within 32 bits.
    mpfr_mul_2si(tol.raw(), scale.raw(), -(static_cast<long>(bits_) - 32), MPFR_RNDN);
    mpfr_mul_2si(prev.raw(), prev.raw(), -1, MPFR_RNDN);
    if (mpfr_cmp(mag.raw(), tol.raw()) <= 0 && mpfr_cmp(mag.raw(), prev.raw()) >= 0) return true;
    mpfr_set(prev.raw(), mag.raw(), MPFR_RNDN);
  }
  return false;
}

double PencilPolynomial::abs_value(std::complex<double> lambda, std::complex<double> zeta) const {
  hp::Scratch s(bits_);
  std::vector<hp::Complex> coeffs;
  hp::Complex z(zeta, bits_), l(lambda, bits_), value(bits_);
  coefficients_at(z, coeffs, s);
  hp::set(value, coeffs[n_]);
  for (int p = n_ - 1; p >= 0; --p) {
    hp::mul(value, value, l, s);
    hp::add(value, value, coeffs[p]);
  }
  return hp::abs(value, s);
}

}  // namespace bmv::detail
