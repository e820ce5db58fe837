#pragma once

#include "bmv/matrix_core.hpp"
#include "bmv/measure.hpp"

#include <vector>

namespace bmv {

// Tr e^{A - tB} from the eigenvalues of the Hermitian matrix A - tB.
double trace_exp(const HermitianPair& pair, double t);
double trace_exp(const ReducedPair& pair, double t);

enum class Coordinates { reduced, original };

// Laplace transform of the measure at t: atoms exactly, the density by Fejer
// quadrature over the stored Chebyshev samples of each interval. In original
// coordinates every location is translated back by the stored shift.
double laplace_of_measure(const MeasureRepresentation& measure, double t, Coordinates coords = Coordinates::reduced);

struct TGrid {
  double min = 0.1;
  double max = 10.0;
  int count = 25;
  bool logarithmic = true;

  std::vector<double> points() const;
};

struct VerifyOptions {
  double eps_split = 0.0;  // 0 selects default_eps_split
  MeasureOptions measure;
  TGrid t_grid;
  double tau_laplace = 1e-6;
  double tau_lemma1 = 1e-8;
  double tau_positivity = 1e-8;
  double tau_branch = 1e-10;  // closure, trace and conjugate residuals
  int lemma1_points = 5;
};

struct VerificationReport {
  int n = 0;
  std::vector<double> b_eigs;
  double shift = 0.0;
  double radius = 0.0;
  int nodes = 0;

  std::vector<double> t_grid;
  std::vector<double> f_direct;
  std::vector<double> f_from_measure;
  double max_rel_error = 0.0;

  std::vector<double> lemma1_s;
  std::vector<double> lemma1_values;
  double lemma1_max = 0.0;

  double min_density = 0.0;
  double max_density = 0.0;
  std::size_t density_samples = 0;

  double closure_residual = 0.0;
  double trace_residual = 0.0;
  double conjugate_residual = 0.0;

  bool laplace_pass = false;
  bool lemma1_pass = false;
  bool positivity_pass = false;
  bool branch_pass = false;

  double tau_laplace = 0.0;
  double tau_lemma1 = 0.0;
  double tau_positivity = 0.0;
  double tau_branch = 0.0;

  std::vector<std::string> warnings;

  bool all_pass() const noexcept { return laplace_pass && lemma1_pass && positivity_pass && branch_pass; }
};

// Reduce, assemble the measure, and check the Laplace identity, the all-branch
// residual, density sign and branch integrity. Errors carry the stage name.
VerificationReport verify(const HermitianPair& pair, const VerifyOptions& options = {});

// Coefficients c_0..c_p of t -> Tr (A + tB)^p, by carrying matrix-valued
// polynomial coefficients through p products. Requires B positive
// semi-definite (min eigenvalue >= -1e-12) and 1 <= p <= 20.
std::vector<double> bmv_poly_coeffs(const HermitianPair& pair, int p);

}  // namespace bmv
