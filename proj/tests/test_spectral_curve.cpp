#include "bmv/error.hpp"
#include "bmv/spectral_curve.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace bmv;
using namespace bmv::testing;

namespace {

ReducedPair swap_reduced() { return ReducedPair::from_diagonal(from_rows({{0, 1}, {1, 0}}), {1, 2}); }

std::vector<Complex> sorted(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

// Every tracked-contour invariant at once.
void expect_integrity(const SpectralContour& c, const ReducedPair& r) {
  const int n = c.dimension(), N = c.node_count();
  const Complex tra = r.a_red.trace();
  double trb = 0;
  for (double b : r.b_eigs) trb += b;
  const double scale = std::max(1.0, c.diagnostics.max_abs_branch);
  for (int k = 0; k < N; ++k) {
    Complex sum = 0;
    for (int j = 0; j < n; ++j) sum += c.branches(j, k);
    EXPECT_LT(std::abs(sum - (tra - c.nodes[k] * trb)), 1e-10 * scale) << "node " << k;

    std::vector<Complex> tracked(n);
    for (int j = 0; j < n; ++j) tracked[j] = c.branches(j, k);
    const auto direct = sorted(pencil_eigenvalues(r, c.nodes[k]));
    const auto ours = sorted(tracked);
    for (int j = 0; j < n; ++j) EXPECT_LT(std::abs(direct[j] - ours[j]), 1e-10 * scale);

    const int conj_k = (N - k) % N;
    for (int j = 0; j < n; ++j) {
      EXPECT_LT(std::abs(c.branches(j, conj_k) - std::conj(c.branches(j, k))), 1e-10 * scale);
    }
  }
  EXPECT_LT(c.diagnostics.closure_residual, 1e-10);
  EXPECT_LT(c.diagnostics.trace_residual, 1e-10);
  EXPECT_LT(c.diagnostics.conjugate_residual, 1e-10);
}

}  // namespace

TEST(PencilEigenvalues, Examples) {
  const auto d = sorted(pencil_eigenvalues(ReducedPair::from_diagonal(Matrix::Zero(2, 2), {1, 2}), {0, 1}));
  EXPECT_NEAR(std::abs(d[0] - Complex(0, -2)), 0, 1e-15);
  EXPECT_NEAR(std::abs(d[1] - Complex(0, -1)), 0, 1e-15);

  const auto e = sorted(pencil_eigenvalues(ReducedPair::from_diagonal(diagonal({3, 4}), {1, 2}), 5.0));
  EXPECT_NEAR(std::abs(e[0] - Complex(-6)), 0, 1e-14);
  EXPECT_NEAR(std::abs(e[1] - Complex(-2)), 0, 1e-14);

  const auto f = sorted(pencil_eigenvalues(swap_reduced(), 2.0));
  EXPECT_NEAR(std::abs(f[0] - (-3 - std::sqrt(2.0))), 0, 1e-14);
  EXPECT_NEAR(std::abs(f[1] - (-3 + std::sqrt(2.0))), 0, 1e-14);
}

TEST(ChooseRadius, DiagonalAcceptsStartingRadius) {
  EXPECT_DOUBLE_EQ(choose_radius(ReducedPair::from_diagonal(Matrix::Zero(2, 2), {1, 2})), 4.0);
}

TEST(ChooseRadius, SwapPairBeyondBranchPoints) {
  // Branch points of (l + z)(l + 2z) - 1: discriminant z^2 + 4 = 0, |z| = 2.
  const double R = choose_radius(swap_reduced());
  EXPECT_GE(R, 8.0);
  EXPECT_GT(R, 2.0);
}

TEST(ChooseRadius, SingleSheet) {
  const ReducedPair r = ReducedPair::from_diagonal(diagonal({3}), {2});
  EXPECT_DOUBLE_EQ(choose_radius(r), 4.0 * 4.0 / 2.0);
}

TEST(TrackBranches, DiagonalBranchesExact) {
  const ReducedPair r = ReducedPair::from_diagonal(Matrix::Zero(2, 2), {1, 2});
  const SpectralContour c = label_branches(track_branches(r, 4.0, 64), r);
  ASSERT_EQ(c.node_count(), 64);
  const int j1 = c.branch_with_label(0), j2 = c.branch_with_label(1);
  for (int k = 0; k < 64; ++k) {
    EXPECT_NEAR(std::abs(c.branches(j1, k) + c.nodes[k]), 0, 1e-14);
    EXPECT_NEAR(std::abs(c.branches(j2, k) + 2.0 * c.nodes[k]), 0, 1e-14);
  }
  expect_integrity(c, r);
}

TEST(TrackBranches, SwapPairSatisfiesCharacteristicEquation) {
  const ReducedPair r = swap_reduced();
  const double R = choose_radius(r);
  const SpectralContour c = track_branches(r, R, 256);
  for (int k = 0; k < 256; ++k) {
    const Complex z = c.nodes[k];
    for (int j = 0; j < 2; ++j) {
      const Complex l = c.branches(j, k);
      EXPECT_LT(std::abs((l + z) * (l + 2.0 * z) - 1.0), 1e-10 * std::norm(z));
    }
  }
  expect_integrity(c, r);
}

TEST(TrackBranches, RejectsBadNodeCounts) {
  const ReducedPair r = swap_reduced();
  EXPECT_THROW(track_branches(r, 8.0, 32), Error);
  EXPECT_THROW(track_branches(r, 8.0, 100), Error);
  EXPECT_THROW(track_branches(r, -1.0, 64), Error);
}

TEST(TrackBranches, TooSmallRadiusIsDetected) {
  // Inside the branch points the two sheets swap once around the circle.
  const ReducedPair r = swap_reduced();
  try {
    label_branches(track_branches(r, 1.0, 256), r);
    FAIL() << "radius inside the branch points went unnoticed";
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::monodromy || e.kind() == ErrorKind::labeling ||
                e.kind() == ErrorKind::tracking)
        << e.what();
  }
}

TEST(LabelBranches, AffineBranches) {
  const ReducedPair r = ReducedPair::from_diagonal(diagonal({5, 7}), {1, 2});
  const SpectralContour c = label_branches(track_branches(r, choose_radius(r), 64), r);
  const int j1 = c.branch_with_label(0), j2 = c.branch_with_label(1);
  EXPECT_NEAR(std::abs(c.recovered_diagonal[j1] - 5.0), 0, 1e-12);
  EXPECT_NEAR(std::abs(c.recovered_diagonal[j2] - 7.0), 0, 1e-12);
}

TEST(LabelBranches, SwapPairMeans) {
  const ReducedPair r = swap_reduced();
  const SpectralContour c = label_branches(track_branches(r, choose_radius(r), 256), r);
  const Complex m1 = c.label_means[c.branch_with_label(0)];
  const Complex m2 = c.label_means[c.branch_with_label(1)];
  EXPECT_GT(m1.real(), 0.75);
  EXPECT_LT(m1.real(), 1.25);
  EXPECT_GT(m2.real(), 1.75);
  EXPECT_LT(m2.real(), 2.25);
}

TEST(LabelBranches, SingleBranch) {
  const ReducedPair r = ReducedPair::from_diagonal(diagonal({3}), {2});
  const SpectralContour c = label_branches(track_branches(r, choose_radius(r), 64), r);
  ASSERT_EQ(c.labels.size(), 1u);
  EXPECT_EQ(c.labels[0], 0);
  EXPECT_NEAR(std::abs(c.recovered_diagonal[0] - 3.0), 0, 1e-12);
}

TEST(SpectralCurveProperty, RandomInstancesKeepInvariants) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 4;
    std::vector<double> b(n);
    for (int j = 0; j < n; ++j) b[j] = j + 1.0;
    const ReducedPair r = ReducedPair::from_diagonal(random_hermitian(n, rng), b);
    const double R = choose_radius(r);
    const SpectralContour c = label_branches(track_branches(r, R, 256), r);
    expect_integrity(c, r);

    // doubling R or N leaves the labels alone
    const SpectralContour c2 = label_branches(track_branches(r, 2 * R, 256), r);
    const SpectralContour c3 = label_branches(track_branches(r, R, 512), r);
    for (int j = 0; j < n; ++j) {
      EXPECT_LT(std::abs(c.branches(c.branch_with_label(j), 0) - c3.branches(c3.branch_with_label(j), 0)), 1e-10 * R);
      EXPECT_LT(std::abs(c.label_means[c.branch_with_label(j)] - b[j]), min_gap(b) / 4);
      EXPECT_LT(std::abs(c2.label_means[c2.branch_with_label(j)] - b[j]), min_gap(b) / 4);
    }
  }
}

TEST(ContourCsv, Layout) {
  const ReducedPair r = ReducedPair::from_diagonal(Matrix::Zero(2, 2), {1, 2});
  std::ostringstream os;
  write_contour_csv(os, track_branches(r, 4.0, 64));
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "k,re_zeta,im_zeta,re_lambda_1,im_lambda_1,re_lambda_2,im_lambda_2");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 64);
}
