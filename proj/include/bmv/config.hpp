#pragma once

#include "bmv/laplace_verify.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>

namespace bmv {

// Every tunable of a CLI run. Defaults:
//
//   key                  default   meaning
//   eps_split            0         eigenvalue splitting; 0 = 1e-6 x spectral diameter of B
//   n_nodes_initial      256       first contour node count (power of two >= 64)
//   n_nodes_max          16384     node-count ceiling for quadrature convergence
//   tau_quad             1e-9      successive-grid agreement, times max(1, max|w|)
//   tau_closure          1e-10     monodromy closure, relative
//   tau_im               1e-8      imaginary part of each density sample, times max(1, |w|)
//   tau_laplace          1e-6      Laplace round-trip, relative
//   tau_lemma1           1e-8      normalised all-branch contour residual
//   tau_positivity       1e-8      allowed negative density, times max(1, max|w|)
//   tau_branch           1e-10     trace / conjugate / closure residuals
//   tau_poly             1e-10     allowed negative coefficient, times max|c|
//   points_per_interval  16        Chebyshev samples between consecutive b_j
//   radius               0         contour radius; 0 = automatic search
//   radius_scale         1         multiplier on the radius
//   t_min, t_max         0.1, 10   Laplace check grid
//   t_count, t_log       25, true
//   seed                 0         for --random
//   random_n             0         0 = read matrices from files
//   poly_p               0         exponent for the poly command
//   coords               reduced   reduced | original
struct RunConfig {
  double eps_split = 0.0;
  int n_nodes_initial = 256;
  int n_nodes_max = 1 << 14;
  double tau_quad = 1e-9;
  double tau_closure = 1e-10;
  double tau_im = 1e-8;
  double tau_laplace = 1e-6;
  double tau_lemma1 = 1e-8;
  double tau_positivity = 1e-8;
  double tau_branch = 1e-10;
  double tau_poly = 1e-10;
  int points_per_interval = 16;
  double radius = 0.0;
  double radius_scale = 1.0;
  TGrid t_grid;
  std::uint64_t seed = 0;
  int random_n = 0;
  int poly_p = 0;
  std::string coords = "reduced";
  std::string matrix_a;
  std::string matrix_b;
  std::string out;
  bool json = false;
  std::string contour_csv;

  // Throws ErrorKind::parameter on the first violated invariant.
  void validate() const;

  Coordinates coordinates() const;
  MeasureOptions measure_options() const;
  VerifyOptions verify_options() const;
};

nlohmann::json to_json(const RunConfig& config);

// Applies the keys present in `j` on top of `base`; unknown keys are an error.
RunConfig apply_json(RunConfig base, const nlohmann::json& j);

// Reads a JSON config file and applies it on top of `base`.
RunConfig apply_config_file(RunConfig base, const std::string& path);

}  // namespace bmv
