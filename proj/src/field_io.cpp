#include "spherefield/field_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "spherefield/errors.hpp"

namespace spherefield {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

double parse_double(const std::string& s, int line_no) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, int line_no) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("line " + std::to_string(line_no) + ": not an integer: '" + s + "'");
  }
  return v;
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV, expected header '" + header + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ConfigError("CSV header '" + line + "' != '" + header + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_spectrum_csv(std::ostream& out, const AngularPowerSpectrum& spectrum) {
  out << "l,C_l\n";
  for (int l = 0; l <= spectrum.l_max(); ++l) out << l << ',' << format_double(spectrum[l]) << '\n';
}

AngularPowerSpectrum read_spectrum_csv(std::istream& in) {
  expect_header(in, "l,C_l");
  std::vector<double> values;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_row(line);
    if (cells.size() != 2) throw ConfigError("line " + std::to_string(line_no) + ": expected 2 fields");
    const int l = parse_int(cells[0], line_no);
    if (l != static_cast<int>(values.size())) {
      throw ConfigError("line " + std::to_string(line_no) + ": degrees must run 0,1,2,... in order");
    }
    values.push_back(parse_double(cells[1], line_no));
  }
  return AngularPowerSpectrum(std::move(values));
}

AngularPowerSpectrum read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spectrum file '" + path + "'");
  return read_spectrum_csv(in);
}

void write_coefficients_csv(std::ostream& out, const HarmonicCoefficients& coeffs) {
  out << "l,m,re,im\n";
  for (int l = 0; l <= coeffs.l_max(); ++l) {
    for (int m = 0; m <= l; ++m) {
      const auto c = coeffs(l, m);
      out << l << ',' << m << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << '\n';
    }
  }
}

HarmonicCoefficients read_coefficients_csv(std::istream& in) {
  expect_header(in, "l,m,re,im");
  struct Row { int l, m; double re, im; };
  std::vector<Row> rows;
  int l_max = -1;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_row(line);
    if (cells.size() != 4) throw ConfigError("line " + std::to_string(line_no) + ": expected 4 fields");
    Row r{parse_int(cells[0], line_no), parse_int(cells[1], line_no), parse_double(cells[2], line_no),
          parse_double(cells[3], line_no)};
    if (r.l < 0 || r.m < 0 || r.m > r.l) {
      throw ConfigError("line " + std::to_string(line_no) + ": need 0 <= m <= l");
    }
    l_max = std::max(l_max, r.l);
    rows.push_back(r);
  }
  if (l_max < 0) throw ConfigError("coefficient file has no rows");
  HarmonicCoefficients out(l_max);
  for (const auto& r : rows) out.set_symmetric(r.l, r.m, {r.re, r.im});
  return out;
}

void write_grid_csv(std::ostream& out, const FieldGrid& grid) {
  out << "theta,phi,value\n";
  for (int i = 0; i < grid.n_theta; ++i) {
    const std::string theta = format_double(grid.thetas[static_cast<std::size_t>(i)]);
    for (int k = 0; k < grid.n_phi; ++k) {
      out << theta << ',' << format_double(grid.phis[static_cast<std::size_t>(k)]) << ','
          << format_double(grid.value(i, k)) << '\n';
    }
  }
}

}  // namespace spherefield
