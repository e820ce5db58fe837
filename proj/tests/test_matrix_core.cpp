#include "bmv/error.hpp"
#include "bmv/laplace_verify.hpp"
#include "bmv/matrix_core.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

using namespace bmv;
using namespace bmv::testing;

namespace {

double trace_expm(const Matrix& m) { return m.exp().trace().real(); }

}  // namespace

TEST(Hermitian, AcceptsAndRejects) {
  EXPECT_TRUE(validate_hermitian(from_rows({{1, {2, 1}}, {{2, -1}, 3}})).hermitian);
  const auto bad = validate_hermitian(from_rows({{1, {2, 1}}, {{2, 1}, 3}}));
  EXPECT_FALSE(bad.hermitian);
  EXPECT_NEAR(bad.deviation, 2.0, 1e-15);
  // complex diagonal is not Hermitian
  EXPECT_FALSE(validate_hermitian(from_rows({{{0, 1e-3}}})).hermitian);
}

TEST(Hermitian, PairValidation) {
  const Matrix a2 = Matrix::Identity(2, 2);
  const Matrix a3 = Matrix::Identity(3, 3);
  try {
    HermitianPair(a2, a3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension);
  }
  try {
    HermitianPair(from_rows({{0, 1}, {2, 0}}), a2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::input);
  }
  Matrix nan = a2;
  nan(0, 0) = std::nan("");
  EXPECT_THROW(HermitianPair(nan, a2), Error);
  EXPECT_THROW(HermitianPair(Matrix(0, 0), Matrix(0, 0)), Error);
}

TEST(Reduce, PermutationAndShiftOnly) {
  const HermitianPair pair(diagonal({1, 2}), diagonal({3, 1}));
  const ReducedPair r = reduce_pair(pair, 1e-6);
  ASSERT_EQ(r.b_eigs.size(), 2u);
  EXPECT_NEAR(r.b_eigs[0], 1 + 1e-6, 1e-15);
  EXPECT_NEAR(r.b_eigs[1], 3 + 1e-6, 1e-15);
  EXPECT_NEAR(r.a_diag(0), 2.0, 1e-15);
  EXPECT_NEAR(r.a_diag(1), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(r.a_red(0, 1)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.shift, 1e-6);
}

TEST(Reduce, IdentityIsSplitToConsecutiveSteps) {
  std::mt19937_64 rng(3);
  const HermitianPair pair(random_hermitian(2, rng), Matrix::Identity(2, 2));
  const ReducedPair r = reduce_pair(pair, 0.01);
  EXPECT_NEAR(r.b_eigs[0], 1.01, 1e-14);
  EXPECT_NEAR(r.b_eigs[1], 1.02, 1e-14);
  EXPECT_DOUBLE_EQ(r.shift, 0.01);
}

TEST(Reduce, TripleDegeneracyCentredOnMiddle) {
  const HermitianPair pair(Matrix::Zero(3, 3), diagonal({2, 2, 2}));
  const ReducedPair r = reduce_pair(pair, 0.1);
  EXPECT_NEAR(r.offsets[0], -0.1, 1e-15);
  EXPECT_NEAR(r.offsets[1], 0.0, 1e-15);
  EXPECT_NEAR(r.offsets[2], 0.1, 1e-15);
  // plus the shift of eps_split
  EXPECT_NEAR(r.b_eigs[0], 2.0, 1e-14);
  EXPECT_NEAR(r.b_eigs[2], 2.2, 1e-14);
}

TEST(Reduce, NegativeSpectrumIsShiftedPositive) {
  const HermitianPair pair(Matrix::Zero(2, 2), diagonal({-3, 1}));
  const ReducedPair r = reduce_pair(pair, 1e-3);
  EXPECT_NEAR(r.shift, 3 + 1e-3, 1e-15);
  EXPECT_NEAR(r.b_eigs[0], 1e-3, 1e-15);
  EXPECT_GT(r.b_eigs[0], 0.0);
}

TEST(Reduce, RejectsNonPositiveEps) {
  const HermitianPair pair(Matrix::Zero(2, 2), diagonal({1, 2}));
  for (double eps : {0.0, -1.0}) {
    try {
      reduce_pair(pair, eps);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::parameter);
    }
  }
}

TEST(Reduce, DefaultEps) {
  EXPECT_NEAR(default_eps_split(diagonal({1, 3, 5})), 4e-6, 1e-20);
  EXPECT_NEAR(default_eps_split(diagonal({2, 2})), 1e-6, 1e-20);
}

TEST(Reduce, TraceExpRelationAgainstMatrixExponential) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const HermitianPair pair(random_hermitian(3, rng), random_hermitian(3, rng));
    const ReducedPair r = reduce_pair(pair, 1e-6);
    for (double t : {0.5, 1.0, 2.0}) {
      Matrix red = r.a_red;
      for (int j = 0; j < 3; ++j) red(j, j) -= t * r.b_eigs[j];
      const double lhs = trace_expm(red);
      const double rhs = std::exp(-r.shift * t) * trace_expm(pair.a() - t * r.b_perturbed());
      EXPECT_LT(rel_diff(lhs, rhs), 1e-10) << "t=" << t;
    }
  }
}

TEST(ReduceProperty, TraceAndSpectrumPreserved) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 5;
    const HermitianPair pair(random_hermitian(n, rng), random_hermitian(n, rng));
    const ReducedPair r = reduce_pair(pair);
    EXPECT_NEAR(std::abs(r.a_red.trace() - pair.a().trace()), 0.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(pair.b());
    for (int j = 0; j < n; ++j) {
      EXPECT_NEAR(r.b_eigs[j] - r.shift - r.offsets[j], eig.eigenvalues()(j), 1e-10);
      if (j) {
        EXPECT_GT(r.b_eigs[j], r.b_eigs[j - 1]);
      }
    }
    EXPECT_GT(r.b_eigs[0], 0.0);
    EXPECT_LT((r.unitary.adjoint() * r.unitary - Matrix::Identity(n, n)).norm(), 1e-12);
  }
}

TEST(ReduceProperty, IdempotentUpToShift) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianPair pair(random_hermitian(3, rng), ramp(3));
    const double eps = 1e-6;
    const ReducedPair r1 = reduce_pair(pair, eps);
    const ReducedPair r2 = reduce_pair(HermitianPair(r1.a_red, diagonal(r1.b_eigs)), eps);
    EXPECT_NEAR(r2.shift, eps, 1e-18);
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(r2.b_eigs[j], r1.b_eigs[j] + eps, 1e-14);
      EXPECT_NEAR(r2.a_diag(j), r1.a_diag(j), 1e-12);
    }
  }
}

TEST(ReduceProperty, SimultaneousConjugationInvariance) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 4;
    const Matrix a = random_hermitian(n, rng);
    const Matrix b = random_hermitian(n, rng);
    const Matrix v = random_unitary(n, rng);
    const ReducedPair r1 = reduce_pair(HermitianPair(a, b), 1e-6);
    const ReducedPair r2 = reduce_pair(HermitianPair(v.adjoint() * a * v, v.adjoint() * b * v, 1e-10), 1e-6);
    for (int j = 0; j < n; ++j) {
      EXPECT_NEAR(r1.b_eigs[j], r2.b_eigs[j], 1e-10);
      EXPECT_NEAR(r1.a_diag(j), r2.a_diag(j), 1e-10);
    }
  }
}

TEST(ReduceProperty, PhaseConvention) {
  std::mt19937_64 rng(15);
  const ReducedPair r = reduce_pair(HermitianPair(random_hermitian(4, rng), random_hermitian(4, rng)));
  for (int c = 0; c < 4; ++c) {
    int first = 0;
    while (std::abs(r.unitary(first, c)) < 1e-12) ++first;
    EXPECT_GT(r.unitary(first, c).real(), 0.0);
    EXPECT_NEAR(r.unitary(first, c).imag(), 0.0, 1e-14);
  }
}

TEST(MinGap, Basics) {
  const std::vector<double> b{1.0, 1.5, 3.0};
  EXPECT_DOUBLE_EQ(min_gap(b), 0.5);
  const std::vector<double> one{2.5};
  EXPECT_DOUBLE_EQ(min_gap(one), 2.5);
  EXPECT_NEAR(spectral_norm(diagonal({-3, 2})), 3.0, 1e-14);
}

TEST(FromDiagonal, Validates) {
  EXPECT_THROW(ReducedPair::from_diagonal(Matrix::Zero(2, 2), {2, 1}), Error);
  EXPECT_THROW(ReducedPair::from_diagonal(Matrix::Zero(2, 2), {0, 1}), Error);
  const ReducedPair r = ReducedPair::from_diagonal(diagonal({5, 7}), {1, 2});
  EXPECT_DOUBLE_EQ(r.a_diag(1), 7.0);
  EXPECT_DOUBLE_EQ(r.shift, 0.0);
}
