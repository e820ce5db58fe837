#include "bmv/spectral_curve.hpp"

#include "bmv/assignment.hpp"
#include "bmv/error.hpp"
#include "pencil_polynomial.hpp"
#include "precise_branches.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace bmv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::string describe(double value) {
  std::ostringstream os;
  os << std::setprecision(6) << value;
  return os.str();
}

// R e^{2 pi i k / N}; the lower half is the conjugate of the upper half so
// that nodes k and N - k are exact conjugates.
std::vector<Complex> make_nodes(double radius, int count) {
  std::vector<Complex> z(count);
  for (int k = 0; k <= count / 2; ++k) z[k] = std::polar(radius, kTwoPi * k / count);
  z[0] = {radius, 0.0};
  z[count / 2] = {-radius, 0.0};
  for (int k = count / 2 + 1; k < count; ++k) z[k] = std::conj(z[count - k]);
  return z;
}

std::vector<hp::Complex> make_precise_nodes(double radius, int count, mpfr_prec_t bits) {
  std::vector<hp::Complex> z(count, hp::Complex(bits));
  hp::Real angle(bits + 16);
  for (int k = 0; k <= count / 2; ++k) {
    mpfr_const_pi(angle.raw(), MPFR_RNDN);
    mpfr_mul_si(angle.raw(), angle.raw(), 2L * k, MPFR_RNDN);
    mpfr_div_si(angle.raw(), angle.raw(), count, MPFR_RNDN);
    mpfr_sin_cos(z[k].im.raw(), z[k].re.raw(), angle.raw(), MPFR_RNDN);
    mpfr_mul_d(z[k].re.raw(), z[k].re.raw(), radius, MPFR_RNDN);
    mpfr_mul_d(z[k].im.raw(), z[k].im.raw(), radius, MPFR_RNDN);
  }
  mpfr_set_d(z[0].re.raw(), radius, MPFR_RNDN);
  mpfr_set_zero(z[0].im.raw(), 1);
  mpfr_set_d(z[count / 2].re.raw(), -radius, MPFR_RNDN);
  mpfr_set_zero(z[count / 2].im.raw(), 1);
  for (int k = count / 2 + 1; k < count; ++k) {
    mpfr_set(z[k].re.raw(), z[count - k].re.raw(), MPFR_RNDN);
    mpfr_neg(z[k].im.raw(), z[count - k].im.raw(), MPFR_RNDN);
  }
  return z;
}

std::vector<Complex> sorted_eigenvalues(const ReducedPair& pair, Complex zeta) {
  auto values = pencil_eigenvalues(pair, zeta);
  std::sort(values.begin(), values.end(), [](Complex l, Complex r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  return values;
}

class Tracker {
 public:
  Tracker(const ReducedPair& pair, const CurveOptions& options, double radius)
      : pair_(pair), options_(options), radius_(radius) {}

  // Continues `from` (values at angle ta, in branch order) to angle tb where
  // the eigenvalues are `to`; returns the values at tb in branch order.
  std::vector<Complex> continue_arc(const std::vector<Complex>& from, double ta, double tb,
                                    const std::vector<Complex>& to, int depth, int arc) {
    const auto n = static_cast<Eigen::Index>(from.size());
    Eigen::MatrixXd cost(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) cost(i, j) = std::abs(from[i] - to[j]);
    const Assignment best = solve_assignment(cost);
    if (n >= 2 && second_best_total(cost, best) < 2.0 * best.total) {
      if (depth >= options_.max_refinement) {
        throw Error(ErrorKind::tracking, "matching stays ambiguous on arc " + std::to_string(arc) + " (theta in [" +
                                             describe(ta) + ", " + describe(tb) + "], radius " +
                                             describe(radius_) + ") after " +
                                             std::to_string(options_.max_refinement) + " refinements");
      }
      if (depth == 0) ++refined_arcs_;
      max_depth_ = std::max(max_depth_, depth + 1);
      const double mid = 0.5 * (ta + tb);
      const auto at_mid = sorted_eigenvalues(pair_, std::polar(radius_, mid));
      const auto half = continue_arc(from, ta, mid, at_mid, depth + 1, arc);
      return continue_arc(half, mid, tb, to, depth + 1, arc);
    }
    std::vector<Complex> out(from.size());
    for (Eigen::Index i = 0; i < n; ++i) out[i] = to[best.column_of_row[i]];
    return out;
  }

  int refined_arcs() const noexcept { return refined_arcs_; }
  int max_depth() const noexcept { return max_depth_; }

 private:
  const ReducedPair& pair_;
  const CurveOptions& options_;
  double radius_;
  int refined_arcs_ = 0;
  int max_depth_ = 0;
};

void fill_residuals(SpectralContour& c, const ReducedPair& pair) {
  const int n = c.dimension();
  const int count = c.node_count();
  double trace_a = 0.0, trace_b = 0.0;
  for (int j = 0; j < n; ++j) {
    trace_a += pair.a_diag(j);
    trace_b += pair.b_eigs[j];
  }
  const double scale = std::max(1.0, c.branches.cwiseAbs().maxCoeff());
  auto& d = c.diagnostics;
  d.max_abs_branch = c.branches.cwiseAbs().maxCoeff();
  d.trace_residual = 0.0;
  d.conjugate_residual = 0.0;
  d.min_separation = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k) {
    Complex sum = 0.0;
    double abs_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      sum += c.branches(j, k);
      abs_sum += std::abs(c.branches(j, k));
    }
    const Complex expected = trace_a - c.nodes[k] * trace_b;
    d.trace_residual = std::max(d.trace_residual, std::abs(sum - expected) / std::max(1.0, abs_sum));

    const int mirror = (count - k) % count;
    for (int j = 0; j < n; ++j) {
      d.conjugate_residual =
          std::max(d.conjugate_residual, std::abs(c.branches(j, mirror) - std::conj(c.branches(j, k))) / scale);
      for (int i = j + 1; i < n; ++i) {
        d.min_separation = std::min(d.min_separation, std::abs(c.branches(i, k) - c.branches(j, k)));
      }
    }
  }
}

mpfr_prec_t working_bits(const SpectralContour& c, const ReducedPair& pair, const CurveOptions& options) {
  // Exponent bound for e^{lambda_j + s zeta} with 0 <= s <= b_n + 1.
  const double s_max = pair.b_eigs.back() + 1.0;
  double exponent = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < c.node_count(); ++k) {
    const double lift = std::max(0.0, s_max * c.nodes[k].real());
    for (int j = 0; j < c.dimension(); ++j) exponent = std::max(exponent, c.branches(j, k).real() + lift);
  }
  exponent = std::max(exponent, 0.0) + std::log(c.radius);
  const double magnitude = std::log2(std::max(1.0, c.branches.cwiseAbs().maxCoeff()));
  const double bits = std::ceil(exponent / std::numbers::ln2 + magnitude + 96.0);
  if (bits > static_cast<double>(options.max_bits)) {
    throw Error(ErrorKind::accuracy, "contour at radius " + describe(c.radius) + " needs " + describe(bits) +
                                         " bits of working precision (ceiling " +
                                         std::to_string(options.max_bits) + ")");
  }
  return static_cast<mpfr_prec_t>(std::max(128.0, bits));
}

void polish(SpectralContour& c, const ReducedPair& pair, const CurveOptions& options) {
  const int n = c.dimension();
  const int count = c.node_count();
  const mpfr_prec_t bits = working_bits(c, pair, options);
  const detail::PencilPolynomial poly(pair, bits);

  auto precise = std::make_shared<detail::PreciseBranches>();
  precise->bits = bits;
  precise->n = n;
  precise->nodes_count = count;
  precise->nodes = make_precise_nodes(c.radius, count, bits);
  precise->values.assign(static_cast<std::size_t>(n) * count, hp::Complex(bits));

  hp::Scratch s(bits);
  std::vector<hp::Complex> coeffs;
  hp::Complex value(bits);
  double det_residual = 0.0;
  for (int k = 0; k < count; ++k) {
    poly.coefficients_at(precise->nodes[k], coeffs, s);
    double separation = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) separation = std::min(separation, std::abs(c.branches(i, k) - c.branches(j, k)));

    for (int j = 0; j < n; ++j) {
      const Complex start = c.branches(j, k);
      auto& lambda = precise->values[static_cast<std::size_t>(j) * count + k];
      mpfr_set_d(lambda.re.raw(), start.real(), MPFR_RNDN);
      mpfr_set_d(lambda.im.raw(), start.imag(), MPFR_RNDN);
      if (!poly.polish(coeffs, lambda, s)) {
        throw Error(ErrorKind::numeric, "Newton polishing did not converge at node " + std::to_string(k));
      }
      const Complex polished = lambda.to_complex();
      const double allowed = n >= 2 ? 0.25 * separation : 1e-6 * std::max(1.0, std::abs(start));
      if (!(std::abs(polished - start) <= allowed)) {
        throw Error(ErrorKind::numeric, "Newton polishing left its branch at node " + std::to_string(k));
      }
      c.branches(j, k) = polished;
    }

    // |P(lambda_j, zeta_k)| / prod_{i != j} |lambda_j - lambda_i| / max(1, |lambda_j|)
    for (int j = 0; j < n; ++j) {
      hp::Complex rounded(c.branches(j, k), bits);
      hp::set(value, coeffs[n]);
      for (int p = n - 1; p >= 0; --p) {
        hp::mul(value, value, rounded, s);
        hp::add(value, value, coeffs[p]);
      }
      double log_ratio = hp::log_abs(value, s) - std::log(std::max(1.0, std::abs(c.branches(j, k))));
      for (int i = 0; i < n; ++i) {
        if (i != j) log_ratio -= std::log(std::abs(c.branches(j, k) - c.branches(i, k)));
      }
      det_residual = std::max(det_residual, std::exp(log_ratio));
    }
  }
  c.diagnostics.determinant_residual = det_residual;
  c.diagnostics.working_bits = bits;
  c.precise = std::move(precise);
}

SpectralContour track(const ReducedPair& pair, double radius, int count, const CurveOptions& options,
                      bool with_polish) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::parameter, "radius must be positive, got " + describe(radius));
  }
  if (!is_power_of_two(count) || count < 64) {
    throw Error(ErrorKind::parameter, "node count must be a power of two >= 64, got " + std::to_string(count));
  }
  const int n = static_cast<int>(pair.n());

  SpectralContour c;
  c.radius = radius;
  c.nodes = make_nodes(radius, count);
  std::vector<std::vector<Complex>> eigs(count);
  for (int k = 0; k < count; ++k) eigs[k] = sorted_eigenvalues(pair, c.nodes[k]);

  Tracker tracker(pair, options, radius);
  std::vector<std::vector<Complex>> values(count);
  values[0] = eigs[0];
  for (int k = 0; k + 1 < count; ++k) {
    values[k + 1] = tracker.continue_arc(values[k], kTwoPi * k / count, kTwoPi * (k + 1) / count, eigs[k + 1], 0, k);
  }
  const auto closed = tracker.continue_arc(values[count - 1], kTwoPi * (count - 1) / count, kTwoPi, eigs[0], 0,
                                           count - 1);

  c.branches.resize(n, count);
  for (int k = 0; k < count; ++k)
    for (int j = 0; j < n; ++j) c.branches(j, k) = values[k][j];

  const double scale = std::max(1.0, c.branches.cwiseAbs().maxCoeff());
  double closure = 0.0;
  for (int j = 0; j < n; ++j) closure = std::max(closure, std::abs(closed[j] - values[0][j]) / scale);
  c.diagnostics.closure_residual = closure;
  c.diagnostics.refined_arcs = tracker.refined_arcs();
  c.diagnostics.max_refinement_depth = tracker.max_depth();
  if (closure > options.tau_closure) {
    throw Error(ErrorKind::monodromy, "branches do not close after one loop at radius " + describe(radius) +
                                          " (residual " + describe(closure) + "); radius too small");
  }

  if (with_polish) polish(c, pair, options);
  fill_residuals(c, pair);
  return c;
}

}  // namespace

int SpectralContour::branch_with_label(int b_index) const {
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] == b_index) return static_cast<int>(j);
  }
  throw Error(ErrorKind::labeling, "no branch carries label " + std::to_string(b_index));
}

std::vector<Complex> pencil_eigenvalues(const ReducedPair& pair, Complex zeta) {
  Matrix m = pair.a_red;
  for (Eigen::Index j = 0; j < pair.n(); ++j) m(j, j) -= zeta * pair.b_eigs[j];
  Eigen::ComplexEigenSolver<Matrix> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::numeric, "eigensolver did not converge at zeta = (" + describe(zeta.real()) + ", " +
                                        describe(zeta.imag()) + ")");
  }
  const auto& e = solver.eigenvalues();
  return {e.data(), e.data() + e.size()};
}

double choose_radius(const ReducedPair& pair, const CurveOptions& options) {
  const double gap = min_gap(pair.b_eigs);
  const double base = 4.0 * (1.0 + spectral_norm(pair.a_red)) / gap;
  std::string trail;
  for (int d = 0; d <= options.max_doublings; ++d) {
    const double radius = std::ldexp(base, d);
    try {
      SpectralContour c = label_branches(track(pair, radius, options.probe_nodes, options, false), pair);
      const double floor = 10.0 * options.polish_tolerance * std::max(1.0, c.diagnostics.max_abs_branch);
      if (c.dimension() < 2 || c.diagnostics.min_separation > floor) return radius;
      trail += "\n  R=" + describe(radius) + ": branches within " + describe(c.diagnostics.min_separation);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::tracking:
        case ErrorKind::monodromy:
        case ErrorKind::labeling:
        case ErrorKind::numeric:
          trail += "\n  R=" + describe(radius) + ": " + e.message();
          break;
        default:
          throw;
      }
    }
  }
  throw Error(ErrorKind::radius_search, "no admissible radius after " + std::to_string(options.max_doublings) +
                                            " doublings from R0=" + describe(base) + ":" + trail);
}

SpectralContour track_branches(const ReducedPair& pair, double radius, int nodes_count, const CurveOptions& options) {
  return track(pair, radius, nodes_count, options, true);
}

SpectralContour label_branches(SpectralContour contour, const ReducedPair& pair) {
  const int n = contour.dimension();
  const int count = contour.node_count();
  const auto& b = pair.b_eigs;
  const double tolerance = min_gap(b) / 4.0;

  contour.label_means.assign(n, 0.0);
  contour.recovered_diagonal.assign(n, 0.0);
  std::vector<int> labels(n, -1);
  std::vector<int> used(n, 0);
  for (int j = 0; j < n; ++j) {
    Complex mean = 0.0;
    for (int k = 0; k < count; ++k) mean += -contour.branches(j, k) / contour.nodes[k];
    mean /= static_cast<double>(count);
    contour.label_means[j] = mean;
    int nearest = 0;
    for (int i = 1; i < n; ++i) {
      if (std::abs(mean - b[i]) < std::abs(mean - b[nearest])) nearest = i;
    }
    if (!(std::abs(mean - b[nearest]) < tolerance)) {
      throw Error(ErrorKind::labeling, "branch " + std::to_string(j) + " has slope " + describe(mean.real()) +
                                           ", not within " + describe(tolerance) + " of any b_j; radius too small");
    }
    if (used[nearest]++) {
      throw Error(ErrorKind::labeling, "two branches share the asymptotic slope b=" + describe(b[nearest]));
    }
    labels[j] = nearest;
  }

  double a_scale = 0.0;
  for (Eigen::Index j = 0; j < pair.n(); ++j) a_scale = std::max(a_scale, pair.a_red.row(j).cwiseAbs().maxCoeff());
  const double slack = 0.5 * a_scale + 1e-10 * contour.radius * b.back();
  for (int j = 0; j < n; ++j) {
    Complex mean = 0.0;
    for (int k = 0; k < count; ++k) mean += contour.branches(j, k) + b[labels[j]] * contour.nodes[k];
    mean /= static_cast<double>(count);
    contour.recovered_diagonal[j] = mean;
    if (std::abs(mean - pair.a_diag(labels[j])) > slack) {
      contour.warnings.push_back("branch " + std::to_string(j) + ": constant term " + describe(mean.real()) +
                                 " is far from a_jj = " + describe(pair.a_diag(labels[j])));
    }
  }
  contour.labels = std::move(labels);
  return contour;
}

void write_contour_csv(std::ostream& out, const SpectralContour& contour) {
  const int n = contour.dimension();
  std::vector<int> order(n);
  for (int j = 0; j < n; ++j) order[j] = contour.labeled() ? contour.branch_with_label(j) : j;
  out << "k,re_zeta,im_zeta";
  for (int j = 1; j <= n; ++j) out << ",re_lambda_" << j << ",im_lambda_" << j;
  out << "\n" << std::setprecision(17);
  for (int k = 0; k < contour.node_count(); ++k) {
    out << k << ',' << contour.nodes[k].real() << ',' << contour.nodes[k].imag();
    for (int j : order) out << ',' << contour.branches(j, k).real() << ',' << contour.branches(j, k).imag();
    out << "\n";
  }
}

}  // namespace bmv
