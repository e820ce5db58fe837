#pragma once

#include "bmv/config.hpp"
#include "bmv/laplace_verify.hpp"
#include "bmv/matrix_core.hpp"
#include "bmv/measure.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace bmv {

// Matrix file: {"n": int, "re": [[...]], "im": [[...]]}, row-major, "im"
// optional. Throws ErrorKind::input with the parse location on bad input.
Matrix parse_matrix_json(std::string_view text);
Matrix load_matrix_json(const std::string& path);
nlohmann::json matrix_to_json(const Matrix& m);

// Seeded test instance: A with real and imaginary parts uniform in [-1, 1],
// B = V diag(1, ..., n) V^* for a random unitary V.
HermitianPair random_pair(int n, std::uint64_t seed);

// printf("%.17g").
std::string format_double(double value);

nlohmann::json measure_to_json(const MeasureRepresentation& m, const RunConfig& config);
void write_atoms_csv(std::ostream& out, const MeasureRepresentation& m, const RunConfig& config);
void write_density_csv(std::ostream& out, const MeasureRepresentation& m, const RunConfig& config);

nlohmann::json report_to_json(const VerificationReport& r, const RunConfig& config);
std::string format_report(const VerificationReport& r);

}  // namespace bmv
