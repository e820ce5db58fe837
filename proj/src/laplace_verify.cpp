#include "bmv/laplace_verify.hpp"

#include "bmv/chebyshev.hpp"
#include "bmv/error.hpp"

#include <algorithm>
#include <cmath>

namespace bmv {

namespace {

double trace_exp_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::numeric, "eigensolver failed in trace_exp");
  return solver.eigenvalues().array().exp().sum();
}

template <class F>
auto staged(const char* stage, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(stage);
  }
}

}  // namespace

double trace_exp(const HermitianPair& pair, double t) { return trace_exp_hermitian(pair.a() - t * pair.b()); }

double trace_exp(const ReducedPair& pair, double t) {
  Matrix m = pair.a_red;
  for (Eigen::Index j = 0; j < pair.n(); ++j) m(j, j) -= t * pair.b_eigs[j];
  return trace_exp_hermitian(m);
}

double laplace_of_measure(const MeasureRepresentation& measure, double t, Coordinates coords) {
  const double offset = coords == Coordinates::original ? measure.shift : 0.0;
  double total = 0.0;
  for (const auto& a : measure.atoms) total += a.weight * std::exp(-(a.location - offset) * t);
  if (measure.density.empty()) return total;

  const int per = measure.points_per_interval;
  const auto weights = fejer_weights(per);
  for (std::size_t k = 0; k + 1 < measure.atoms.size(); ++k) {
    const double half = 0.5 * (measure.atoms[k + 1].location - measure.atoms[k].location);
    double sum = 0.0;
    for (int i = 0; i < per; ++i) {
      const auto& sample = measure.density[k * per + i];
      sum += weights[i] * std::exp(-(sample.s - offset) * t) * sample.w;
    }
    total += half * sum;
  }
  return total;
}

std::vector<double> TGrid::points() const {
  if (count < 1 || !(min <= max) || (logarithmic && !(min > 0.0))) {
    throw Error(ErrorKind::parameter, "invalid t grid");
  }
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    t[i] = logarithmic ? min * std::pow(max / min, f) : min + (max - min) * f;
  }
  return t;
}

VerificationReport verify(const HermitianPair& pair, const VerifyOptions& options) {
  VerificationReport r;
  r.tau_laplace = options.tau_laplace;
  r.tau_lemma1 = options.tau_lemma1;
  r.tau_positivity = options.tau_positivity;
  r.tau_branch = options.tau_branch;

  const ReducedPair reduced = staged("reduce", [&] {
    return options.eps_split > 0.0 ? reduce_pair(pair, options.eps_split) : reduce_pair(pair);
  });
  r.n = static_cast<int>(reduced.n());
  r.b_eigs = reduced.b_eigs;
  r.shift = reduced.shift;

  const MeasureResult mr = staged("measure", [&] { return assemble_measure(reduced, options.measure); });
  const auto& measure = mr.measure;
  r.radius = mr.diagnostics.radius;
  r.nodes = mr.diagnostics.nodes;
  r.warnings = mr.diagnostics.warnings;

  staged("laplace", [&] {
    r.t_grid = options.t_grid.points();
    for (double t : r.t_grid) {
      const double direct = trace_exp(reduced, t);
      const double from_measure = laplace_of_measure(measure, t);
      r.f_direct.push_back(direct);
      r.f_from_measure.push_back(from_measure);
      r.max_rel_error = std::max(r.max_rel_error, std::abs(direct - from_measure) / direct);
    }
    return 0;
  });

  staged("lemma1", [&] {
    if (mr.contour) {
      const double lo = reduced.b_eigs.front(), hi = reduced.b_eigs.back();
      const DensityEvaluator evaluator(*mr.contour, reduced);
      for (int i = 1; i <= options.lemma1_points; ++i) {
        const double s = lo + (hi - lo) * i / (options.lemma1_points + 1);
        const double value = evaluator.integrate(s, r.n).normalized;
        r.lemma1_s.push_back(s);
        r.lemma1_values.push_back(value);
        r.lemma1_max = std::max(r.lemma1_max, value);
      }
      r.closure_residual = mr.diagnostics.contour.closure_residual;
      r.trace_residual = mr.diagnostics.contour.trace_residual;
      r.conjugate_residual = mr.diagnostics.contour.conjugate_residual;
    }
    return 0;
  });

  r.density_samples = measure.density.size();
  if (!measure.density.empty()) {
    r.min_density = measure.density.front().w;
    r.max_density = measure.density.front().w;
    for (const auto& d : measure.density) {
      r.min_density = std::min(r.min_density, d.w);
      r.max_density = std::max(r.max_density, d.w);
    }
  }
  double peak = 0.0;
  for (const auto& d : measure.density) peak = std::max(peak, std::abs(d.w));

  r.laplace_pass = r.max_rel_error < options.tau_laplace;
  r.lemma1_pass = r.lemma1_max < options.tau_lemma1;
  r.positivity_pass = r.min_density >= -options.tau_positivity * std::max(1.0, peak);
  r.branch_pass = r.closure_residual < options.tau_branch && r.trace_residual < options.tau_branch &&
                  r.conjugate_residual < options.tau_branch;
  return r;
}

std::vector<double> bmv_poly_coeffs(const HermitianPair& pair, int p) {
  if (p < 1 || p > 20) throw Error(ErrorKind::parameter, "p must be in [1, 20], got " + std::to_string(p));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(pair.b(), Eigen::EigenvaluesOnly);
  if (solver.eigenvalues()(0) < -1e-12) {
    throw Error(ErrorKind::precondition, "B is not positive semi-definite (min eigenvalue " +
                                             std::to_string(solver.eigenvalues()(0)) + ")");
  }
  const auto n = pair.n();
  // power[m] is the coefficient of t^m in (A + tB)^k.
  std::vector<Matrix> power{Matrix::Identity(n, n)};
  for (int k = 1; k <= p; ++k) {
    std::vector<Matrix> next(k + 1, Matrix::Zero(n, n));
    for (int m = 0; m < k; ++m) {
      next[m] += power[m] * pair.a();
      next[m + 1] += power[m] * pair.b();
    }
    power = std::move(next);
  }
  std::vector<double> coeffs(p + 1);
  for (int m = 0; m <= p; ++m) coeffs[m] = power[m].trace().real();
  return coeffs;
}

}  // namespace bmv
