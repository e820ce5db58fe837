#include "bmv/config.hpp"

#include "bmv/error.hpp"

#include <fstream>
#include <sstream>

namespace bmv {

using nlohmann::json;

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::parameter, m); };
  if (eps_split < 0.0) fail("eps_split must be >= 0");
  if (!is_power_of_two(n_nodes_initial) || n_nodes_initial < 64) fail("n_nodes_initial must be a power of two >= 64");
  if (!is_power_of_two(n_nodes_max) || n_nodes_max < n_nodes_initial) {
    fail("n_nodes_max must be a power of two >= n_nodes_initial");
  }
  for (double tau : {tau_quad, tau_closure, tau_im, tau_laplace, tau_lemma1, tau_positivity, tau_branch, tau_poly}) {
    if (!(tau > 0.0)) fail("all tolerances must be positive");
  }
  if (points_per_interval < 2) fail("points_per_interval must be >= 2");
  if (radius < 0.0 || !(radius_scale > 0.0)) fail("radius must be >= 0 and radius_scale > 0");
  if (t_grid.count < 1 || !(t_grid.min <= t_grid.max) || (t_grid.logarithmic && !(t_grid.min > 0.0))) {
    fail("invalid t grid");
  }
  if (random_n < 0) fail("random_n must be >= 0");
  if (coords != "reduced" && coords != "original") fail("coords must be 'reduced' or 'original'");
}

Coordinates RunConfig::coordinates() const {
  return coords == "original" ? Coordinates::original : Coordinates::reduced;
}

MeasureOptions RunConfig::measure_options() const {
  MeasureOptions m;
  m.nodes_initial = n_nodes_initial;
  m.nodes_max = n_nodes_max;
  m.tau_quad = tau_quad;
  m.tau_im = tau_im;
  m.points_per_interval = points_per_interval;
  m.radius = radius;
  m.radius_scale = radius_scale;
  m.curve.tau_closure = tau_closure;
  return m;
}

VerifyOptions RunConfig::verify_options() const {
  VerifyOptions v;
  v.eps_split = eps_split;
  v.measure = measure_options();
  v.t_grid = t_grid;
  v.tau_laplace = tau_laplace;
  v.tau_lemma1 = tau_lemma1;
  v.tau_positivity = tau_positivity;
  v.tau_branch = tau_branch;
  return v;
}

json to_json(const RunConfig& c) {
  return json{
      {"eps_split", c.eps_split},
      {"n_nodes_initial", c.n_nodes_initial},
      {"n_nodes_max", c.n_nodes_max},
      {"tau_quad", c.tau_quad},
      {"tau_closure", c.tau_closure},
      {"tau_im", c.tau_im},
      {"tau_laplace", c.tau_laplace},
      {"tau_lemma1", c.tau_lemma1},
      {"tau_positivity", c.tau_positivity},
      {"tau_branch", c.tau_branch},
      {"tau_poly", c.tau_poly},
      {"points_per_interval", c.points_per_interval},
      {"radius", c.radius},
      {"radius_scale", c.radius_scale},
      {"t_min", c.t_grid.min},
      {"t_max", c.t_grid.max},
      {"t_count", c.t_grid.count},
      {"t_log", c.t_grid.logarithmic},
      {"seed", c.seed},
      {"random_n", c.random_n},
      {"poly_p", c.poly_p},
      {"coords", c.coords},
      {"matrix_a", c.matrix_a},
      {"matrix_b", c.matrix_b},
  };
}

RunConfig apply_json(RunConfig c, const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::input, "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "eps_split") c.eps_split = value.get<double>();
      else if (key == "n_nodes_initial") c.n_nodes_initial = value.get<int>();
      else if (key == "n_nodes_max") c.n_nodes_max = value.get<int>();
      else if (key == "tau_quad") c.tau_quad = value.get<double>();
      else if (key == "tau_closure") c.tau_closure = value.get<double>();
      else if (key == "tau_im") c.tau_im = value.get<double>();
      else if (key == "tau_laplace") c.tau_laplace = value.get<double>();
      else if (key == "tau_lemma1") c.tau_lemma1 = value.get<double>();
      else if (key == "tau_positivity") c.tau_positivity = value.get<double>();
      else if (key == "tau_branch") c.tau_branch = value.get<double>();
      else if (key == "tau_poly") c.tau_poly = value.get<double>();
      else if (key == "points_per_interval") c.points_per_interval = value.get<int>();
      else if (key == "radius") c.radius = value.get<double>();
      else if (key == "radius_scale") c.radius_scale = value.get<double>();
      else if (key == "t_min") c.t_grid.min = value.get<double>();
      else if (key == "t_max") c.t_grid.max = value.get<double>();
      else if (key == "t_count") c.t_grid.count = value.get<int>();
      else if (key == "t_log") c.t_grid.logarithmic = value.get<bool>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "random_n") c.random_n = value.get<int>();
      else if (key == "poly_p") c.poly_p = value.get<int>();
      else if (key == "coords") c.coords = value.get<std::string>();
      else if (key == "matrix_a") c.matrix_a = value.get<std::string>();
      else if (key == "matrix_b") c.matrix_b = value.get<std::string>();
      else throw Error(ErrorKind::input, "unknown config key \"" + key + "\"");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::input, std::string("config: ") + e.what());
  }
  return c;
}

RunConfig apply_config_file(RunConfig base, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::input, path + ": " + e.what());
  }
  return apply_json(std::move(base), j);
}

}  // namespace bmv
