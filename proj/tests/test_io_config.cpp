#include "bmv/config.hpp"
#include "bmv/error.hpp"
#include "bmv/io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bmv;
using namespace bmv::testing;

TEST(MatrixJson, RealAndComplex) {
  const Matrix m = parse_matrix_json(R"({"n": 2, "re": [[1, 2], [2, 0.1]], "im": [[0, -1], [1, 0]]})");
  EXPECT_EQ(m(0, 1), Complex(2, -1));
  EXPECT_EQ(m(1, 1), Complex(0.1, 0));  // round-to-nearest, bit-exact
  const Matrix r = parse_matrix_json(R"({"n": 1, "re": [[-3e-5]]})");
  EXPECT_EQ(r(0, 0), Complex(-3e-5, 0));
}

TEST(MatrixJson, RoundTrip) {
  std::mt19937_64 rng(71);
  const Matrix m = random_hermitian(3, rng);
  EXPECT_EQ(parse_matrix_json(matrix_to_json(m).dump()), m);
}

TEST(MatrixJson, Malformed) {
  for (const char* text : {R"({"n": 2, "re": [[1, 2], [2, 0]])",       // truncated
                           R"({"n": 2, "re": [[1, 2]]})",              // rows
                           R"({"n": 2, "re": [[1, 2], [2]]})",         // columns
                           R"({"n": 2, "re": [[1, "x"], [2, 0]]})",    // type
                           R"({"re": [[1]]})",                         // no n
                           R"([1, 2])"}) {
    try {
      parse_matrix_json(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::input) << text;
    }
  }
  try {
    parse_matrix_json("{\"n\": 2,\n \"re\": [[1, 2] [2, 0]]}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(RandomPair, DeterministicAndWellFormed) {
  const HermitianPair p1 = random_pair(4, 9), p2 = random_pair(4, 9), p3 = random_pair(4, 10);
  EXPECT_EQ(p1.a(), p2.a());
  EXPECT_EQ(p1.b(), p2.b());
  EXPECT_NE(p1.a(), p3.a());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(p1.b());
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(eig.eigenvalues()(j), j + 1.0, 1e-12);
  EXPECT_LE(p1.a().real().cwiseAbs().maxCoeff(), 1.0);
  EXPECT_LE(p1.a().imag().cwiseAbs().maxCoeff(), 1.0);
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2), "2");
  EXPECT_EQ(std::stod(format_double(1.0 / 3)), 1.0 / 3);
}

TEST(Config, DefaultsValidate) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.n_nodes_initial, 256);
  EXPECT_EQ(c.n_nodes_max, 16384);
  EXPECT_EQ(c.measure_options().tau_quad, 1e-9);
  EXPECT_EQ(c.verify_options().tau_laplace, 1e-6);
}

TEST(Config, Invariants) {
  auto expect_bad = [](auto mutate) {
    RunConfig c;
    mutate(c);
    try {
      c.validate();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::parameter);
    }
  };
  expect_bad([](RunConfig& c) { c.n_nodes_initial = 100; });
  expect_bad([](RunConfig& c) { c.n_nodes_initial = 32; });
  expect_bad([](RunConfig& c) { c.n_nodes_max = 128; });
  expect_bad([](RunConfig& c) { c.tau_quad = 0; });
  expect_bad([](RunConfig& c) { c.tau_im = -1; });
  expect_bad([](RunConfig& c) { c.points_per_interval = 1; });
  expect_bad([](RunConfig& c) { c.coords = "polar"; });
  expect_bad([](RunConfig& c) { c.t_grid.min = 0; });
}

TEST(Config, JsonRoundTripAndUnknownKeys) {
  RunConfig c;
  c.tau_quad = 3e-10;
  c.n_nodes_initial = 512;
  c.t_grid.logarithmic = false;
  c.coords = "original";
  const RunConfig back = apply_json(RunConfig{}, to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(apply_json(RunConfig{}, nlohmann::json{{"tau_quadd", 1}}), Error);
  EXPECT_THROW(apply_json(RunConfig{}, nlohmann::json{{"tau_quad", "small"}}), Error);
}

TEST(Config, FileLayersOnTop) {
  const auto path = std::filesystem::temp_directory_path() / "bmv_config_test.json";
  std::ofstream(path) << R"({"n_nodes_initial": 128, "tau_im": 1e-7})";
  RunConfig base;
  base.tau_quad = 5e-9;
  const RunConfig c = apply_config_file(base, path.string());
  EXPECT_EQ(c.n_nodes_initial, 128);
  EXPECT_EQ(c.tau_im, 1e-7);
  EXPECT_EQ(c.tau_quad, 5e-9);
  std::filesystem::remove(path);
  EXPECT_THROW(apply_config_file(base, path.string()), Error);
}

TEST(Export, CsvEmbedsConfigAndHonoursCoordinates) {
  MeasureRepresentation m;
  m.atoms = {{1.5, 2.0}, {2.5, 3.0}};
  m.density = {{2.0, 0.25}};
  m.support_lo = 1.5;
  m.support_hi = 2.5;
  m.shift = 0.5;
  RunConfig c;
  std::ostringstream reduced;
  write_atoms_csv(reduced, m, c);
  EXPECT_EQ(reduced.str().rfind("# config: {", 0), 0u);
  EXPECT_NE(reduced.str().find("\ns,weight\n1.5,2\n2.5,3\n"), std::string::npos);

  c.coords = "original";
  std::ostringstream original;
  write_density_csv(original, m, c);
  EXPECT_NE(original.str().find("\ns,w\n1.5,0.25\n"), std::string::npos);

  const auto j = measure_to_json(m, c);
  EXPECT_EQ(j["atoms"][0]["s"], 1.0);
  EXPECT_EQ(j["support"][1], 2.0);
  EXPECT_EQ(j["shift"], 0.5);
  EXPECT_EQ(j["config"]["coords"], "original");
}

TEST(Export, ReportJsonMirrorsFields) {
  VerificationReport r;
  r.n = 2;
  r.max_rel_error = 1e-12;
  r.laplace_pass = true;
  r.tau_laplace = 1e-6;
  const auto j = report_to_json(r, RunConfig{});
  EXPECT_EQ(j["n"], 2);
  EXPECT_EQ(j["laplace_pass"], true);
  EXPECT_EQ(j["tolerances"]["laplace"], 1e-6);
  EXPECT_TRUE(j.contains("config"));
  EXPECT_NE(format_report(r).find("FAIL"), std::string::npos);
}
