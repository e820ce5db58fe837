// The inverse-Laplace oracle against the closed form available for 2x2
// pairs, w(s) = |a12|^2 I_1(2 |a12| sqrt(q)) / (|a12| sqrt(q)) with
// q = (s - b1)(b2 - s), a11 = a22 = 0.

#include "inverse_laplace_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using bmv::oracle::Pair2x2;

namespace {

long double bessel_density(long double s) {
  const long double q = (s - 1) * (2 - s);
  const long double x = 2 * std::sqrt(q);
  // I_1(x) / sqrt(q) by its power series
  long double term = x / 2, sum = 0;
  for (int k = 0; k < 40; ++k) {
    sum += term;
    term *= (x / 2) * (x / 2) / ((k + 1) * (k + 2));
  }
  return sum / std::sqrt(q);
}

}  // namespace

TEST(Oracle, TraceExpClosedForm) {
  Pair2x2 p;
  p.a12 = 1;
  // eigenvalues of [[-t, 1], [1, -2t]]
  for (long double t : {0.0L, 0.5L, 3.0L}) {
    const long double m = -1.5L * t, r = std::sqrt(0.25L * t * t + 1);
    EXPECT_NEAR(static_cast<double>(std::abs(bmv::oracle::trace_exp(p, t) - (std::exp(m + r) + std::exp(m - r)))),
                0.0, 1e-14);
  }
}

TEST(Oracle, MatchesBesselClosedForm) {
  Pair2x2 p;
  p.a12 = 1;
  for (long double s : {1.001L, 1.1L, 1.25L, 1.5L, 1.75L, 1.9L}) {
    EXPECT_NEAR(static_cast<double>(bmv::oracle::inverse_laplace_density(p, s)),
                static_cast<double>(bessel_density(s)), 1e-12)
        << static_cast<double>(s);
  }
}

TEST(Oracle, FrozenValues) {
  Pair2x2 p;
  p.a12 = 1;
  EXPECT_NEAR(static_cast<double>(bmv::oracle::inverse_laplace_density(p, 1.25L)), 1.096725895714857, 1e-14);
  EXPECT_NEAR(static_cast<double>(bmv::oracle::inverse_laplace_density(p, 1.5L)), 1.1303182079849693, 1e-14);
  EXPECT_NEAR(static_cast<double>(bmv::oracle::inverse_laplace_density(p, 1.75L)), 1.0967258957148483, 1e-14);
}
