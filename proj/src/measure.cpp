#include "bmv/measure.hpp"

#include "bmv/chebyshev.hpp"
#include "bmv/error.hpp"
#include "high_precision.hpp"
#include "precise_branches.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace bmv {

namespace {

std::string describe(double value) {
  std::ostringstream os;
  os << std::setprecision(6) << value;
  return os.str();
}

void require_ready(const SpectralContour& contour, const ReducedPair& pair) {
  if (contour.dimension() != pair.n()) throw Error(ErrorKind::dimension, "contour and pair sizes differ");
  if (!contour.labeled()) throw Error(ErrorKind::parameter, "contour must be labelled");
  if (!contour.precise) throw Error(ErrorKind::parameter, "contour carries no polished branch values");
}

}  // namespace

std::vector<Atom> atoms(const ReducedPair& pair) {
  std::vector<Atom> out;
  out.reserve(pair.b_eigs.size());
  for (Eigen::Index j = 0; j < pair.n(); ++j) {
    const Complex a = pair.a_red(j, j);
    if (std::abs(a.imag()) > 1e-12 * std::max(1.0, std::abs(a))) {
      throw Error(ErrorKind::numeric, "diagonal entry " + std::to_string(j) + " of a_red is not real");
    }
    out.push_back({pair.b_eigs[j], std::exp(a.real())});
  }
  return out;
}

struct DensityEvaluator::Impl {
  std::shared_ptr<const detail::PreciseBranches> precise;
  std::vector<double> b;
  double radius = 0.0;
  int n = 0;
  int count = 0;
  std::vector<std::vector<hp::Complex>> prefix;  // prefix[m][k] = sum_{j <= m} zeta_k e^{lambda_(j)(zeta_k)}
  std::vector<std::vector<double>> real_part;   // Re lambda_(j)(zeta_k), label order
  std::vector<double> node_real;
};

DensityEvaluator::DensityEvaluator(const SpectralContour& contour, const ReducedPair& pair)
    : impl_(std::make_unique<Impl>()) {
  require_ready(contour, pair);
  auto& im = *impl_;
  im.precise = contour.precise;
  im.b = pair.b_eigs;
  im.radius = contour.radius;
  im.n = contour.dimension();
  im.count = contour.node_count();
  const auto& pb = *im.precise;
  const mpfr_prec_t bits = pb.bits;
  hp::Scratch s(bits);
  hp::Complex e(bits), term(bits);

  im.prefix.assign(im.n, std::vector<hp::Complex>(im.count, hp::Complex(bits)));
  im.real_part.assign(im.n, std::vector<double>(im.count));
  im.node_real.resize(im.count);
  for (int k = 0; k < im.count; ++k) im.node_real[k] = contour.nodes[k].real();
  for (int m = 0; m < im.n; ++m) {
    const int row = contour.branch_with_label(m);
    for (int k = 0; k < im.count; ++k) {
      im.real_part[m][k] = contour.branches(row, k).real();
      hp::exp(e, pb.value(row, k), s);
      hp::mul(term, e, pb.nodes[k], s);
      if (m == 0) {
        hp::set(im.prefix[m][k], term);
      } else {
        hp::add(im.prefix[m][k], im.prefix[m - 1][k], term);
      }
    }
  }
}

DensityEvaluator::~DensityEvaluator() = default;
DensityEvaluator::DensityEvaluator(DensityEvaluator&&) noexcept = default;
DensityEvaluator& DensityEvaluator::operator=(DensityEvaluator&&) noexcept = default;

ContourIntegral DensityEvaluator::integrate(double s, int count) const {
  const auto& im = *impl_;
  ContourIntegral out;
  if (count <= 0) {
    out.value = 0.0;
    out.log_scale = -std::numeric_limits<double>::infinity();
    return out;
  }
  count = std::min(count, im.n);
  const auto& pb = *im.precise;
  const mpfr_prec_t bits = pb.bits;
  hp::Scratch scratch(bits);
  hp::Complex acc(bits), z(bits), ez(bits);
  const auto& weights = im.prefix[count - 1];
  for (int k = 0; k < im.count; ++k) {
    mpfr_mul_d(z.re.raw(), pb.nodes[k].re.raw(), s, MPFR_RNDN);
    mpfr_mul_d(z.im.raw(), pb.nodes[k].im.raw(), s, MPFR_RNDN);
    hp::exp(ez, z, scratch);
    hp::mul_add(acc, weights[k], ez, scratch);
  }
  mpfr_div_si(acc.re.raw(), acc.re.raw(), im.count, MPFR_RNDN);
  mpfr_div_si(acc.im.raw(), acc.im.raw(), im.count, MPFR_RNDN);

  double log_scale = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < count; ++m)
    for (int k = 0; k < im.count; ++k) log_scale = std::max(log_scale, im.real_part[m][k] + s * im.node_real[k]);
  log_scale += std::log(im.radius);

  out.value = acc.to_complex();
  out.log_scale = log_scale;
  out.normalized = std::exp(hp::log_abs(acc, scratch) - log_scale);
  return out;
}

double DensityEvaluator::density(double s, double tau_im) const {
  const auto& im = *impl_;
  if (!(s > im.b.front() && s < im.b.back())) {
    throw Error(ErrorKind::domain, "s = " + describe(s) + " is outside the open support (" + describe(im.b.front()) +
                                       ", " + describe(im.b.back()) + ")");
  }
  int count = 0;
  for (double bj : im.b) {
    if (bj == s) throw Error(ErrorKind::domain, "s coincides with an atom at " + describe(s));
    if (bj < s) ++count;
  }
  const ContourIntegral r = integrate(s, count);
  const double w = r.value.real();
  if (!(std::abs(r.value.imag()) <= tau_im * std::max(1.0, std::abs(w)))) {
    throw Error(ErrorKind::accuracy, "density at s = " + describe(s) + " has imaginary part " +
                                         describe(r.value.imag()) + " with " +
                                         std::to_string(im.count) + " nodes; node count too small");
  }
  return w;
}

double density_w(const SpectralContour& contour, const ReducedPair& pair, double s, double tau_im) {
  return DensityEvaluator(contour, pair).density(s, tau_im);
}

std::vector<DensitySample> density_grid(const SpectralContour& contour, const ReducedPair& pair,
                                        int points_per_interval, double tau_im) {
  if (points_per_interval < 2) throw Error(ErrorKind::parameter, "points_per_interval must be at least 2");
  const auto x = chebyshev_points(points_per_interval);
  const DensityEvaluator evaluator(contour, pair);
  const auto& b = pair.b_eigs;
  std::vector<DensitySample> out;
  out.reserve((b.size() - 1) * x.size());
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    const double mid = 0.5 * (b[k] + b[k + 1]);
    const double half = 0.5 * (b[k + 1] - b[k]);
    for (double xi : x) {
      const double s = mid + half * xi;
      out.push_back({s, evaluator.density(s, tau_im)});
    }
  }
  return out;
}

double lemma1_residual(const SpectralContour& contour, const ReducedPair& pair, double s) {
  return DensityEvaluator(contour, pair).integrate(s, contour.dimension()).normalized;
}

MeasureResult assemble_measure(const ReducedPair& pair, const MeasureOptions& options) {
  if (options.points_per_interval < 2) throw Error(ErrorKind::parameter, "points_per_interval must be at least 2");
  if (!(options.tau_quad > 0.0) || !(options.tau_im > 0.0)) throw Error(ErrorKind::parameter, "tolerances must be positive");
  if (options.nodes_max < options.nodes_initial) throw Error(ErrorKind::parameter, "nodes_max below nodes_initial");

  MeasureResult result;
  auto& m = result.measure;
  m.atoms = atoms(pair);
  m.support_lo = pair.b_eigs.front();
  m.support_hi = pair.b_eigs.back();
  m.points_per_interval = options.points_per_interval;
  m.shift = pair.shift;
  if (pair.n() == 1) return result;

  CurveOptions curve = options.curve;
  curve.probe_nodes = options.nodes_initial;
  const double base = options.radius > 0.0 ? options.radius : choose_radius(pair, curve);
  const double radius = base * options.radius_scale;
  auto& diag = result.diagnostics;
  diag.radius = radius;

  std::optional<std::vector<DensitySample>> previous;
  std::string trail;
  for (int nodes = options.nodes_initial; nodes <= options.nodes_max; nodes *= 2) {
    diag.node_trace.push_back(nodes);
    SpectralContour contour = label_branches(track_branches(pair, radius, nodes, curve), pair);
    std::vector<DensitySample> grid;
    try {
      grid = density_grid(contour, pair, options.points_per_interval, options.tau_im);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::accuracy) throw;
      trail += "\n  N=" + std::to_string(nodes) + ": " + e.message();
      previous.reset();
      continue;
    }
    if (previous) {
      double change = 0.0, peak = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        change = std::max(change, std::abs(grid[i].w - (*previous)[i].w));
        peak = std::max(peak, std::abs(grid[i].w));
      }
      diag.change_trace.push_back(change);
      trail += "\n  N=" + std::to_string(nodes) + ": max change " + describe(change);
      if (change < options.tau_quad * std::max(1.0, peak)) {
        m.density = std::move(grid);
        diag.nodes = nodes;
        diag.contour = contour.diagnostics;
        diag.warnings = contour.warnings;
        result.contour = std::move(contour);
        return result;
      }
    } else {
      trail += "\n  N=" + std::to_string(nodes) + ": first level";
    }
    previous = std::move(grid);
  }
  throw Error(ErrorKind::convergence, "density did not converge by N=" + std::to_string(options.nodes_max) +
                                          " at radius " + describe(radius) + ":" + trail);
}

}  // namespace bmv
