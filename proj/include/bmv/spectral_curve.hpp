#pragma once

#include "bmv/matrix_core.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace bmv {

namespace detail {
struct PreciseBranches;
}

struct CurveOptions {
  int probe_nodes = 256;          // nodes used while searching for a radius
  double tau_closure = 1e-10;     // monodromy closure, relative to max |lambda|
  int max_refinement = 10;        // midpoint subdivisions per arc
  int max_doublings = 20;
  double polish_tolerance = 1e-14;
  long max_bits = 1L << 15;       // precision ceiling for the polished branches
};

struct ContourDiagnostics {
  double closure_residual = 0.0;
  double trace_residual = 0.0;
  double conjugate_residual = 0.0;
  double determinant_residual = 0.0;
  double min_separation = 0.0;  // min over nodes of min_{i != j} |lambda_i - lambda_j|
  double max_abs_branch = 0.0;
  int refined_arcs = 0;
  int max_refinement_depth = 0;
  long working_bits = 0;
};

// Eigenvalue branches of the pencil a_red - zeta diag(b) sampled on the circle
// |zeta| = radius at N uniformly spaced nodes (counterclockwise from zeta = R).
// branches(j, k) is branch j at nodes[k]. After labelling, labels[j] is the
// index of the B-eigenvalue whose asymptotics branch j follows.
struct SpectralContour {
  double radius = 0.0;
  std::vector<Complex> nodes;
  Eigen::MatrixXcd branches;
  std::vector<int> labels;
  std::vector<Complex> label_means;         // mean of -lambda_j / zeta
  std::vector<Complex> recovered_diagonal;  // mean of lambda_j + b_label zeta
  ContourDiagnostics diagnostics;
  std::vector<std::string> warnings;
  std::shared_ptr<const detail::PreciseBranches> precise;

  int node_count() const noexcept { return static_cast<int>(nodes.size()); }
  int dimension() const noexcept { return static_cast<int>(branches.rows()); }
  bool labeled() const noexcept { return !labels.empty(); }
  // Row of `branches` carrying label `b_index`; throws if unlabelled.
  int branch_with_label(int b_index) const;
};

// Eigenvalues (with multiplicity, unordered) of a_red - zeta diag(b_eigs).
std::vector<Complex> pencil_eigenvalues(const ReducedPair& pair, Complex zeta);

// Radius R0 = 4 (1 + ||A||_2) / min_gap(b) doubled until tracking closes,
// labelling is unambiguous and branches stay separated.
double choose_radius(const ReducedPair& pair, const CurveOptions& options = {});

// Continues the n branches once around |zeta| = radius by optimal matching
// between consecutive nodes, subdividing arcs whose matching is ambiguous,
// then polishes every value by Newton iteration in extended precision.
SpectralContour track_branches(const ReducedPair& pair, double radius, int nodes_count,
                               const CurveOptions& options = {});

// Assigns each branch to the B-eigenvalue nearest to the mean of
// -lambda_j(zeta)/zeta over the contour.
SpectralContour label_branches(SpectralContour contour, const ReducedPair& pair);

// k, Re zeta_k, Im zeta_k, then Re/Im of each branch (label order if labelled).
void write_contour_csv(std::ostream& out, const SpectralContour& contour);

}  // namespace bmv
