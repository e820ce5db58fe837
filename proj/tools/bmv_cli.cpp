// bmv: representing measure of t -> Tr exp(A - tB) from the command line.
//
//   bmv density --matrix-a A.json --matrix-b B.json [--out DIR] [--json]
//   bmv atoms   --matrix-a A.json --matrix-b B.json [--out DIR] [--json]
//   bmv verify  --random 3 --seed 7 [--out report.json]
//   bmv poly    --matrix-a A.json --matrix-b B.json --p 4
//
// Settings are layered: built-in defaults, then the JSON file named by
// $BMV_CONFIG, then --config, then individual flags.
//
// Exit codes: 0 ok, 2 bad input or parameters, 3 numerical failure
// (convergence, tracking, labelling), 4 a verification check failed.

#include "bmv/config.hpp"
#include "bmv/error.hpp"
#include "bmv/io.hpp"
#include "bmv/laplace_verify.hpp"
#include "bmv/measure.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using bmv::ErrorKind;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCheck = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension:
    case ErrorKind::parameter:
    case ErrorKind::precondition:
    case ErrorKind::input:
    case ErrorKind::domain:
      return kExitInput;
    default:
      return kExitNumeric;
  }
}

// Flag values that were actually given; unset ones leave the config alone.
struct Overrides {
  std::optional<std::string> config_file;
  std::optional<std::string> matrix_a, matrix_b, out, contour_csv, coords;
  std::optional<int> random_n, nodes, max_nodes, points, t_count, p;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps_split, radius, radius_scale, t_min, t_max;
  std::optional<double> tol_quad, tol_closure, tol_im, tol_laplace, tol_lemma1, tol_positivity, tol_branch, tol_poly;
  bool json = false;
  bool t_linear = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_file, "JSON config file applied after $BMV_CONFIG");
  cmd->add_option("--matrix-a", o.matrix_a, "A as a JSON matrix file");
  cmd->add_option("--matrix-b", o.matrix_b, "B as a JSON matrix file");
  cmd->add_option("--random", o.random_n, "use a seeded random pair of this size instead of files");
  cmd->add_option("--seed", o.seed, "seed for --random");
  cmd->add_option("--eps-split", o.eps_split, "splitting step for repeated eigenvalues of B");
  cmd->add_option("--coords", o.coords, "reduced | original")->check(CLI::IsMember({"reduced", "original"}));
}

void add_measure(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--nodes", o.nodes, "initial contour node count");
  cmd->add_option("--max-nodes", o.max_nodes, "node count ceiling");
  cmd->add_option("--points", o.points, "density samples per interval");
  cmd->add_option("--radius", o.radius, "contour radius (0 = automatic)");
  cmd->add_option("--radius-scale", o.radius_scale, "multiplier on the contour radius");
  cmd->add_option("--tol-quad", o.tol_quad);
  cmd->add_option("--tol-closure", o.tol_closure);
  cmd->add_option("--tol-im", o.tol_im);
}

template <class T>
void take(T& dst, const std::optional<T>& src) {
  if (src) dst = *src;
}

bmv::RunConfig build_config(const Overrides& o) {
  bmv::RunConfig c;
  if (const char* env = std::getenv("BMV_CONFIG"); env && *env) c = bmv::apply_config_file(c, env);
  if (o.config_file) c = bmv::apply_config_file(c, *o.config_file);
  take(c.matrix_a, o.matrix_a);
  take(c.matrix_b, o.matrix_b);
  take(c.random_n, o.random_n);
  take(c.seed, o.seed);
  take(c.eps_split, o.eps_split);
  take(c.coords, o.coords);
  take(c.n_nodes_initial, o.nodes);
  take(c.n_nodes_max, o.max_nodes);
  take(c.points_per_interval, o.points);
  take(c.radius, o.radius);
  take(c.radius_scale, o.radius_scale);
  take(c.tau_quad, o.tol_quad);
  take(c.tau_closure, o.tol_closure);
  take(c.tau_im, o.tol_im);
  take(c.tau_laplace, o.tol_laplace);
  take(c.tau_lemma1, o.tol_lemma1);
  take(c.tau_positivity, o.tol_positivity);
  take(c.tau_branch, o.tol_branch);
  take(c.tau_poly, o.tol_poly);
  take(c.t_grid.min, o.t_min);
  take(c.t_grid.max, o.t_max);
  take(c.t_grid.count, o.t_count);
  if (o.t_linear) c.t_grid.logarithmic = false;
  take(c.poly_p, o.p);
  take(c.out, o.out);
  take(c.contour_csv, o.contour_csv);
  if (o.json) c.json = true;
  // A larger initial count drags the ceiling along unless one was given.
  if (o.nodes && !o.max_nodes) c.n_nodes_max = std::max(c.n_nodes_max, c.n_nodes_initial);
  c.validate();
  return c;
}

bmv::HermitianPair load_pair(const bmv::RunConfig& c) {
  if (c.random_n > 0) return bmv::random_pair(c.random_n, c.seed);
  if (c.matrix_a.empty() || c.matrix_b.empty()) {
    throw bmv::Error(ErrorKind::input, "need --matrix-a and --matrix-b, or --random N");
  }
  return bmv::HermitianPair(bmv::load_matrix_json(c.matrix_a), bmv::load_matrix_json(c.matrix_b));
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bmv::Error(ErrorKind::input, "cannot write " + path.string());
  return out;
}

int cmd_density(const bmv::RunConfig& c) {
  const bmv::HermitianPair pair = load_pair(c);
  const bmv::ReducedPair reduced = c.eps_split > 0 ? bmv::reduce_pair(pair, c.eps_split) : bmv::reduce_pair(pair);
  const bmv::MeasureResult result = bmv::assemble_measure(reduced, c.measure_options());
  for (const auto& w : result.diagnostics.warnings) std::cerr << "warning: " << w << "\n";

  const std::filesystem::path dir = c.out.empty() ? "." : c.out;
  std::filesystem::create_directories(dir);
  if (c.json) {
    auto out = open_out(dir / "measure.json");
    out << bmv::measure_to_json(result.measure, c).dump(2) << "\n";
  } else {
    auto atoms = open_out(dir / "atoms.csv");
    bmv::write_atoms_csv(atoms, result.measure, c);
    auto density = open_out(dir / "density.csv");
    bmv::write_density_csv(density, result.measure, c);
  }
  if (!c.contour_csv.empty() && result.contour) {
    auto out = open_out(c.contour_csv);
    out << "# config: " << bmv::to_json(c).dump() << "\n";
    bmv::write_contour_csv(out, *result.contour);
  }
  std::cerr << "n = " << reduced.n() << ", radius = " << result.diagnostics.radius
            << ", nodes = " << result.diagnostics.nodes << ", shift = " << reduced.shift << "\n";
  return kExitOk;
}

// Atoms only: no branch tracking.
int cmd_atoms(const bmv::RunConfig& c) {
  const bmv::HermitianPair pair = load_pair(c);
  const bmv::ReducedPair reduced = c.eps_split > 0 ? bmv::reduce_pair(pair, c.eps_split) : bmv::reduce_pair(pair);
  bmv::MeasureRepresentation m;
  m.atoms = bmv::atoms(reduced);
  m.support_lo = reduced.b_eigs.front();
  m.support_hi = reduced.b_eigs.back();
  m.shift = reduced.shift;

  const std::filesystem::path dir = c.out.empty() ? "." : c.out;
  std::filesystem::create_directories(dir);
  if (c.json) {
    auto out = open_out(dir / "atoms.json");
    auto j = bmv::measure_to_json(m, c);
    j.erase("density");
    out << j.dump(2) << "\n";
  } else {
    auto out = open_out(dir / "atoms.csv");
    bmv::write_atoms_csv(out, m, c);
  }
  return kExitOk;
}

int cmd_verify(const bmv::RunConfig& c) {
  const bmv::HermitianPair pair = load_pair(c);
  const bmv::VerificationReport report = bmv::verify(pair, c.verify_options());
  std::cout << bmv::format_report(report);
  if (!c.out.empty()) {
    auto out = open_out(c.out);
    out << bmv::report_to_json(report, c).dump(2) << "\n";
  }
  return report.all_pass() ? kExitOk : kExitCheck;
}

int cmd_poly(const bmv::RunConfig& c) {
  if (c.poly_p < 1) throw bmv::Error(ErrorKind::parameter, "--p is required (1..20)");
  const bmv::HermitianPair pair = load_pair(c);
  const std::vector<double> coeffs = bmv::bmv_poly_coeffs(pair, c.poly_p);
  double largest = 0.0;
  for (double x : coeffs) largest = std::max(largest, std::abs(x));
  bool nonnegative = true;
  std::string line;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k) line += ' ';
    line += bmv::format_double(coeffs[k]);
    nonnegative = nonnegative && coeffs[k] >= -c.tau_poly * largest;
  }
  std::cout << line << "\n";
  if (!c.out.empty()) {
    auto out = open_out(c.out);
    out << nlohmann::json{{"p", c.poly_p}, {"coefficients", coeffs}, {"config", bmv::to_json(c)}}.dump(2) << "\n";
  }
  if (!nonnegative) std::cerr << "negative coefficient beyond tolerance\n";
  return nonnegative ? kExitOk : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Representing measure of Tr exp(A - tB) via branch contour integrals"};
  app.require_subcommand(1);
  Overrides o;

  auto* density = app.add_subcommand("density", "write atoms and density samples");
  add_common(density, o);
  add_measure(density, o);
  density->add_option("--out", o.out, "output directory (default .)");
  density->add_flag("--json", o.json, "write measure.json instead of CSV");
  density->add_option("--contour-csv", o.contour_csv, "also dump the tracked branches");

  auto* atoms = app.add_subcommand("atoms", "write the atoms only, skipping contour work");
  add_common(atoms, o);
  atoms->add_option("--out", o.out, "output directory (default .)");
  atoms->add_flag("--json", o.json, "write atoms.json instead of CSV");

  auto* verify = app.add_subcommand("verify", "check the Laplace identity, positivity and branch integrity");
  add_common(verify, o);
  add_measure(verify, o);
  verify->add_option("--out", o.out, "report JSON path");
  verify->add_option("--t-min", o.t_min);
  verify->add_option("--t-max", o.t_max);
  verify->add_option("--t-count", o.t_count);
  verify->add_flag("--t-linear", o.t_linear, "linear instead of logarithmic t grid");
  verify->add_option("--tol-laplace", o.tol_laplace);
  verify->add_option("--tol-lemma1", o.tol_lemma1);
  verify->add_option("--tol-positivity", o.tol_positivity);
  verify->add_option("--tol-branch", o.tol_branch);

  auto* poly = app.add_subcommand("poly", "coefficients of t -> Tr (A + tB)^p");
  add_common(poly, o);
  poly->add_option("--p", o.p, "exponent");
  poly->add_option("--tol-poly", o.tol_poly);
  poly->add_option("--out", o.out, "coefficients JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    const bmv::RunConfig config = build_config(o);
    if (density->parsed()) return cmd_density(config);
    if (atoms->parsed()) return cmd_atoms(config);
    if (verify->parsed()) return cmd_verify(config);
    return cmd_poly(config);
  } catch (const bmv::Error& e) {
    std::cerr << "bmv: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "bmv: " << e.what() << "\n";
    return kExitInput;
  }
}
