#include "bmv/io.hpp"

#include "bmv/error.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace bmv {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::input, what + ": " + e.what() + " (byte " + std::to_string(e.byte) + ")");
  }
}

Matrix read_block(const json& rows, int n, const char* key) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw Error(ErrorKind::input, std::string("\"") + key + "\" must be an array of " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw Error(ErrorKind::input, std::string("\"") + key + "\" row " + std::to_string(r) + " must have " +
                                        std::to_string(n) + " entries");
    }
    for (int c = 0; c < n; ++c) {
      if (!row[c].is_number()) {
        throw Error(ErrorKind::input, std::string("\"") + key + "\"[" + std::to_string(r) + "][" +
                                          std::to_string(c) + "] is not a number");
      }
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

std::uint64_t next(std::mt19937_64& rng) { return rng(); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(next(rng) >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

}  // namespace

// ---------------------------------------------------------------- matrices

Matrix parse_matrix_json(std::string_view text) {
  const json j = parse_json(text, "matrix");
  if (!j.is_object()) throw Error(ErrorKind::input, "matrix file must hold a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw Error(ErrorKind::input, "\"n\" must be an integer");
  const int n = j["n"].get<int>();
  if (n < 1) throw Error(ErrorKind::input, "\"n\" must be at least 1");
  if (!j.contains("re")) throw Error(ErrorKind::input, "missing \"re\"");
  Matrix m = read_block(j["re"], n, "re");
  if (j.contains("im")) m += Complex(0.0, 1.0) * read_block(j["im"], n, "im");
  return m;
}

Matrix load_matrix_json(const std::string& path) {
  try {
    return parse_matrix_json(read_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.message());
  }
}

json matrix_to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  bool complex = false;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row_re = json::array(), row_im = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row_re.push_back(m(r, c).real());
      row_im.push_back(m(r, c).imag());
      complex = complex || m(r, c).imag() != 0.0;
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  json j{{"n", m.rows()}, {"re", std::move(re)}};
  if (complex) j["im"] = std::move(im);
  return j;
}

HermitianPair random_pair(int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::parameter, "random instance size must be >= 1");
  std::mt19937_64 rng(seed);
  Matrix a(n, n);
  for (int r = 0; r < n; ++r) {
    a(r, r) = uniform(rng, -1.0, 1.0);
    for (int c = r + 1; c < n; ++c) {
      a(r, c) = Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
      a(c, r) = std::conj(a(r, c));
    }
  }
  Matrix g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) = Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
  const Matrix v = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Eigen::VectorXcd d(n);
  for (int j = 0; j < n; ++j) d(j) = j + 1.0;
  Matrix b = v * d.asDiagonal() * v.adjoint();
  b = 0.5 * (b + b.adjoint()).eval();
  return HermitianPair(std::move(a), std::move(b), 1e-10);
}

// ---------------------------------------------------------------- exports

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

json measure_to_json(const MeasureRepresentation& m, const RunConfig& config) {
  const double offset = config.coordinates() == Coordinates::original ? m.shift : 0.0;
  json atoms = json::array(), density = json::array();
  for (const auto& a : m.atoms) atoms.push_back({{"s", a.location - offset}, {"weight", a.weight}});
  for (const auto& d : m.density) density.push_back({{"s", d.s - offset}, {"w", d.w}});
  return json{{"atoms", std::move(atoms)},
              {"support", {m.support_lo - offset, m.support_hi - offset}},
              {"density", std::move(density)},
              {"shift", m.shift},
              {"coords", config.coords},
              {"config", to_json(config)}};
}

void write_atoms_csv(std::ostream& out, const MeasureRepresentation& m, const RunConfig& config) {
  const double offset = config.coordinates() == Coordinates::original ? m.shift : 0.0;
  out << "# config: " << to_json(config).dump() << "\n";
  out << "s,weight\n";
  for (const auto& a : m.atoms) out << format_double(a.location - offset) << ',' << format_double(a.weight) << "\n";
}

void write_density_csv(std::ostream& out, const MeasureRepresentation& m, const RunConfig& config) {
  const double offset = config.coordinates() == Coordinates::original ? m.shift : 0.0;
  out << "# config: " << to_json(config).dump() << "\n";
  out << "s,w\n";
  for (const auto& d : m.density) out << format_double(d.s - offset) << ',' << format_double(d.w) << "\n";
}

json report_to_json(const VerificationReport& r, const RunConfig& config) {
  return json{
      {"n", r.n},
      {"b_eigs", r.b_eigs},
      {"shift", r.shift},
      {"radius", r.radius},
      {"nodes", r.nodes},
      {"t_grid", r.t_grid},
      {"f_direct", r.f_direct},
      {"f_from_measure", r.f_from_measure},
      {"max_rel_error", r.max_rel_error},
      {"lemma1_s", r.lemma1_s},
      {"lemma1_values", r.lemma1_values},
      {"lemma1_max", r.lemma1_max},
      {"min_density", r.min_density},
      {"max_density", r.max_density},
      {"density_samples", r.density_samples},
      {"closure_residual", r.closure_residual},
      {"trace_residual", r.trace_residual},
      {"conjugate_residual", r.conjugate_residual},
      {"laplace_pass", r.laplace_pass},
      {"lemma1_pass", r.lemma1_pass},
      {"positivity_pass", r.positivity_pass},
      {"branch_pass", r.branch_pass},
      {"tolerances",
       {{"laplace", r.tau_laplace},
        {"lemma1", r.tau_lemma1},
        {"positivity", r.tau_positivity},
        {"branch", r.tau_branch}}},
      {"warnings", r.warnings},
      {"config", to_json(config)},
  };
}

std::string format_report(const VerificationReport& r) {
  auto flag = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  char buf[512];
  std::ostringstream os;
  std::snprintf(buf, sizeof buf, "n = %d, shift = %.6g, radius = %.6g, nodes = %d\n", r.n, r.shift, r.radius, r.nodes);
  os << buf;
  std::snprintf(buf, sizeof buf, "  laplace round-trip   %s  max rel error %.3e (tol %.1e)\n", flag(r.laplace_pass),
                r.max_rel_error, r.tau_laplace);
  os << buf;
  std::snprintf(buf, sizeof buf, "  all-branch residual  %s  max %.3e (tol %.1e)\n", flag(r.lemma1_pass), r.lemma1_max,
                r.tau_lemma1);
  os << buf;
  std::snprintf(buf, sizeof buf, "  density positivity   %s  min %.6g over %zu samples (tol %.1e)\n",
                flag(r.positivity_pass), r.min_density, r.density_samples, r.tau_positivity);
  os << buf;
  std::snprintf(buf, sizeof buf, "  branch integrity     %s  closure %.1e trace %.1e conjugate %.1e (tol %.1e)\n",
                flag(r.branch_pass), r.closure_residual, r.trace_residual, r.conjugate_residual, r.tau_branch);
  os << buf;
  for (const auto& w : r.warnings) os << "  warning: " << w << "\n";
  os << (r.all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
  return os.str();
}

}  // namespace bmv
