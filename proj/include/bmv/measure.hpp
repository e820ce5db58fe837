#pragma once

#include "bmv/matrix_core.hpp"
#include "bmv/spectral_curve.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bmv {

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

struct DensitySample {
  double s = 0.0;
  double w = 0.0;
};

// mu = sum_j weight_j delta_{b_j} + w(s) ds on [b_1, b_n], in reduced
// coordinates. Density samples are grouped by interval (b_k, b_{k+1}),
// points_per_interval Chebyshev points each, ascending.
struct MeasureRepresentation {
  std::vector<Atom> atoms;
  double support_lo = 0.0;
  double support_hi = 0.0;
  std::vector<DensitySample> density;
  int points_per_interval = 0;
  double shift = 0.0;
};

// (b_j, e^{a_jj}) for every j.
std::vector<Atom> atoms(const ReducedPair& pair);

struct ContourIntegral {
  Complex value;              // (1/2 pi i) sum_j trapezoid of the closed integral
  double log_scale = 0.0;     // log of max_{j,k} |e^{lambda_j + s zeta_k}| R
  double normalized = 0.0;    // |value| / e^{log_scale}
};

// Trapezoidal contour integrals of e^{lambda_j(zeta) + s zeta} over a
// labelled, polished contour, in the contour's working precision. Branches
// are taken in ascending-b order, so the first `count` of them are the ones
// with the smallest b_j.
class DensityEvaluator {
 public:
  DensityEvaluator(const SpectralContour& contour, const ReducedPair& pair);
  ~DensityEvaluator();
  DensityEvaluator(DensityEvaluator&&) noexcept;
  DensityEvaluator& operator=(DensityEvaluator&&) noexcept;

  ContourIntegral integrate(double s, int count) const;

  // Real part of integrate(s, #{j : b_j < s}); throws ErrorKind::accuracy if
  // the imaginary part exceeds tau_im * max(1, |w|).
  double density(double s, double tau_im) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double density_w(const SpectralContour& contour, const ReducedPair& pair, double s, double tau_im = 1e-8);

std::vector<DensitySample> density_grid(const SpectralContour& contour, const ReducedPair& pair,
                                        int points_per_interval, double tau_im = 1e-8);

// |(1/2 pi i) sum over all n branches| normalised by the largest integrand
// magnitude times R. Exactly zero in exact arithmetic for every s.
double lemma1_residual(const SpectralContour& contour, const ReducedPair& pair, double s);

struct MeasureOptions {
  int nodes_initial = 256;
  int nodes_max = 1 << 14;
  double tau_quad = 1e-9;
  double tau_im = 1e-8;
  int points_per_interval = 16;
  double radius = 0.0;        // 0 selects choose_radius
  double radius_scale = 1.0;  // multiplies the chosen or given radius
  CurveOptions curve;
};

struct MeasureDiagnostics {
  double radius = 0.0;
  int nodes = 0;
  std::vector<int> node_trace;
  std::vector<double> change_trace;  // max |w_N - w_{N/2}| at each level after the first
  ContourDiagnostics contour;
  std::vector<std::string> warnings;
};

struct MeasureResult {
  MeasureRepresentation measure;
  MeasureDiagnostics diagnostics;
  std::optional<SpectralContour> contour;  // final contour; empty for n = 1
};

// Radius search, tracking, labelling and density sampling with the node count
// doubled until successive density grids agree to tau_quad * max(1, max|w|).
MeasureResult assemble_measure(const ReducedPair& pair, const MeasureOptions& options = {});

}  // namespace bmv
