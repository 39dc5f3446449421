#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lrcov/io.hpp"

using namespace lrcov;

namespace {

Matrix parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv_matrix(in);
}

std::size_t parse_error_row(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.row();
  }
  return 0;
}

}  // namespace

TEST_CASE("csv parsing") {
  const Matrix m = parse("1,2\n3,4\n5,6\n");
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 2);
  CHECK(m(2, 1) == 6.0);
  const Matrix h = parse("a,b\n1.5,-2e-3\n");
  CHECK(h.rows() == 1);
  CHECK(h(0, 1) == -2e-3);
  const Matrix crlf = parse("x,y\r\n1,2\r\n3,4\r\n");
  CHECK(crlf.rows() == 2);
  CHECK(crlf(1, 1) == 4.0);
  CHECK(parse("1, 2\n +3,4\n")(1, 0) == 3.0);
  CHECK(parse("7\n8").rows() == 2);

  CHECK(parse_error_row("1,2\n3") == 2);
  try {
    parse("1,2\n3,x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.row() == 2);
    CHECK(e.column() == 2);
    CHECK(std::string(e.what()).find("row 2, column 2") != std::string::npos);
    CHECK(e.exit_code() == 3);
  }
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("a,b\n"), ParseError);
  CHECK_THROWS_AS(parse("1,nan\n"), ParseError);
  CHECK_THROWS_AS(parse("1,2\n3,4,5\n"), ParseError);
}

TEST_CASE("load panel") {
  const auto dir = std::filesystem::temp_directory_path() / "lrcov_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "p.csv");
    f << "a,b\n1,2\n3,4\n5,6\n";
  }
  const TimeSeriesPanel x = load_panel(dir / "p.csv");
  CHECK(x.n() == 3);
  CHECK(x.p() == 2);
  CHECK_THROWS_AS(load_panel(dir / "missing.csv"), ConfigError);
  {
    std::ofstream f(dir / "one.csv");
    f << "1,2\n";
  }
  CHECK_THROWS_AS(load_panel(dir / "one.csv"), InputError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(-1.25e-7) == "-1.25e-07");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 100.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = g(rng) * std::pow(10.0, i % 11 - 5);
    const double back = std::stod(format_number(v));
    CHECK(std::abs(back - v) <= 5e-12 * std::abs(v));
    CHECK(std::stod(format_full(v)) == v);
  }
}

TEST_CASE("matrix round trip to 12 significant digits") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(40, 7);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 7; ++j) m(i, j) = g(rng) * std::pow(10.0, j - 3);
  }
  std::stringstream buffer;
  write_matrix_csv(buffer, m);
  const Matrix back = parse_csv_matrix(buffer);
  REQUIRE(back.rows() == 40);
  REQUIRE(back.cols() == 7);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 7; ++j) CHECK(std::abs(back(i, j) - m(i, j)) <= 5e-12 * std::abs(m(i, j)));
  }
}

TEST_CASE("results tables") {
  std::vector<EstimatorSummary> rows(2);
  rows[0].id = EstimatorId::Db;
  rows[0].mean = {114.4712, 129.87, 3.4649999, 32.83, 1.1451, 14.43, 0.69, 3.655};
  rows[1].id = EstimatorId::Taper;
  rows[1].mean = {47.45, 6.49, 3.47, 5.62, 0.4789, 0.72, 0.69, 0.62};
  std::stringstream full;
  write_results_csv(full, rows);
  std::string header;
  std::getline(full, header);
  CHECK(header == "estimator,frob,l1,max,spec,rel_frob,rel_l1,rel_max,rel_spec");
  std::string line;
  std::getline(full, line);
  CHECK(line.rfind("DB,114.4712,", 0) == 0);

  std::stringstream table;
  write_results_table(table, rows, TableFormat::Csv);
  std::getline(table, header);
  std::getline(table, line);
  CHECK(line == "DB,114.47,129.87,3.46,32.83,1.15,14.43,0.69,3.65");
  std::stringstream md;
  write_results_table(md, rows, TableFormat::Markdown);
  CHECK(md.str().find("| Taper | 47.45 |") != std::string::npos);
}
