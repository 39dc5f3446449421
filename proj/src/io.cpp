#include "lrcov/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace lrcov {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

std::array<double ErrorReport::*, 8> fields() {
  return {&ErrorReport::frob,     &ErrorReport::l1,     &ErrorReport::max,
          &ErrorReport::spectral, &ErrorReport::rel_frob, &ErrorReport::rel_l1,
          &ErrorReport::rel_max,  &ErrorReport::rel_spectral};
}

}  // namespace

Matrix parse_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (first && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto cells = split(view);
    std::vector<double> values(cells.size());
    std::size_t bad = 0;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!parse_double(cells[j], values[j]) && bad == 0) bad = j + 1;
    }
    if (first) {
      first = false;
      width = cells.size();
      if (bad != 0) continue;  // header
    } else if (cells.size() != width) {
      throw ParseError("ragged row: expected " + std::to_string(width) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no, std::min(cells.size(), width) + 1);
    }
    if (bad != 0) {
      throw ParseError("non-numeric cell '" + std::string(cells[bad - 1]) + "'", line_no, bad);
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (!std::isfinite(values[j])) throw ParseError("non-finite value", line_no, j + 1);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("no numeric rows", line_no, 1);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

TimeSeriesPanel load_panel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input file '" + path.string() + "'");
  return TimeSeriesPanel(parse_csv_matrix(in));
}

std::string format_number(double value) {
  char buf[64];
  for (int precision = 1; precision <= 12; ++precision) {
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general,
                                   precision);
    double back = 0.0;
    std::from_chars(buf, res.ptr, back);
    if (back == value || precision == 12) return std::string(buf, res.ptr);
  }
  return {};
}

std::string format_full(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_number(m(r, c));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path.string() + "'");
  write_matrix_csv(out, m);
}

void write_results_csv(std::ostream& out, const std::vector<EstimatorSummary>& rows) {
  out << kResultsHeader << '\n';
  for (const EstimatorSummary& row : rows) {
    out << estimator_name(row.id);
    for (auto f : fields()) out << ',' << format_full(row.mean.*f);
    out << '\n';
  }
}

void write_results_table(std::ostream& out, const std::vector<EstimatorSummary>& rows,
                         TableFormat format) {
  const char* names[] = {"E_F", "E_1", "E_max", "E_2", "E_F/V_F", "E_1/V_1", "E_max/V_max",
                         "E_2/V_2"};
  std::ostringstream line;
  if (format == TableFormat::Markdown) {
    out << "| Method |";
    for (const char* n : names) out << ' ' << n << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < 8; ++i) out << "---:|";
    out << '\n';
  } else {
    out << kResultsHeader << '\n';
  }
  for (const EstimatorSummary& row : rows) {
    if (format == TableFormat::Markdown) {
      out << "| " << estimator_name(row.id) << " |";
      for (auto f : fields()) out << ' ' << std::fixed << std::setprecision(2) << row.mean.*f << " |";
    } else {
      out << estimator_name(row.id);
      for (auto f : fields()) out << ',' << std::fixed << std::setprecision(2) << row.mean.*f;
    }
    out << std::defaultfloat << '\n';
  }
}

}  // namespace lrcov
