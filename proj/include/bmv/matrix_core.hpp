#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace bmv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kHermitianTolerance = 1e-12;

struct HermitianCheck {
  bool hermitian = false;
  double deviation = 0.0;  // max |m_ij - conj(m_ji)|
};

// Hermiticity test relative to the largest entry: deviation <= tol * (1 + max|m_ij|).
// Throws ErrorKind::dimension for non-square input.
HermitianCheck validate_hermitian(const Matrix& m, double tol = kHermitianTolerance);

// Validated input pair (A, B). Construction throws on non-square, mismatched,
// empty or non-Hermitian matrices.
class HermitianPair {
 public:
  HermitianPair(Matrix a, Matrix b, double tol = kHermitianTolerance);

  Eigen::Index n() const noexcept { return a_.rows(); }
  const Matrix& a() const noexcept { return a_; }
  const Matrix& b() const noexcept { return b_; }

 private:
  Matrix a_;
  Matrix b_;
};

// Canonical form of a pair: B diagonal with strictly increasing positive
// entries b_eigs, A conjugated into B's eigenbasis.
//
//   b_eigs[j] = eig(B)[j] + offsets[j] + shift
//   a_red     = U^* A U
//
// so Tr e^{a_red - t diag(b_eigs)} = e^{-shift t} Tr e^{A - t B_perturbed} with
// B_perturbed = U diag(eig(B) + offsets) U^*.
struct ReducedPair {
  Matrix a_red;
  std::vector<double> b_eigs;
  double shift = 0.0;
  Matrix unitary;
  double eps_split = 0.0;
  std::vector<double> b_original;  // eig(B), ascending, before splitting
  std::vector<double> offsets;     // integer multiples of eps_split

  Eigen::Index n() const noexcept { return a_red.rows(); }
  double a_diag(Eigen::Index j) const { return a_red(j, j).real(); }

  Matrix b_perturbed() const;

  // A pair that is already in reduced form: identity unitary, no shift, no
  // splitting. Throws ErrorKind::parameter unless b is strictly increasing and
  // positive and a is Hermitian of matching size.
  static ReducedPair from_diagonal(Matrix a, std::vector<double> b);
};

// 1e-6 times the spectral diameter of B, or 1e-6 for scalar B.
double default_eps_split(const Matrix& b);

ReducedPair reduce_pair(const HermitianPair& pair, double eps_split);
ReducedPair reduce_pair(const HermitianPair& pair);

// Smallest distance between consecutive entries of an ascending list; for a
// single entry the entry itself.
double min_gap(std::span<const double> ascending);

// Largest singular value.
double spectral_norm(const Matrix& m);

}  // namespace bmv
