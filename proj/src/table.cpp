#include "crocco/table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "crocco/errors.hpp"

namespace crocco {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

// Locate the cell containing v and the local coordinate in [0,1].
std::pair<int, double> locate(const std::vector<double>& nodes, double v) {
  if (nodes.size() == 1) return {0, 0.0};
  if (v <= nodes.front()) return {0, 0.0};
  if (v >= nodes.back()) return {static_cast<int>(nodes.size()) - 2, 1.0};
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), v);
  const int k = static_cast<int>(it - nodes.begin()) - 1;
  return {k, (v - nodes[k]) / (nodes[k + 1] - nodes[k])};
}

}  // namespace

Table2D::Table2D(std::vector<double> a, std::vector<double> b, std::vector<double> values)
    : a_(std::move(a)), b_(std::move(b)), values_(std::move(values)) {
  if (a_.empty() || b_.empty() || values_.size() != a_.size() * b_.size()) {
    throw ValidationError("table: value count does not match the coordinate lattice");
  }
  for (const auto* nodes : {&a_, &b_}) {
    if (!std::is_sorted(nodes->begin(), nodes->end()) ||
        std::adjacent_find(nodes->begin(), nodes->end()) != nodes->end()) {
      throw ValidationError("table: coordinates must be strictly increasing");
    }
  }
  const std::size_t na = a_.size(), nb = b_.size();
  da_.assign(values_.size(), 0.0);
  db_.assign(values_.size(), 0.0);
  if (na >= 3) {
    for (std::size_t ib = 0; ib < nb; ++ib) {
      std::vector<double> column(na);
      for (std::size_t ia = 0; ia < na; ++ia) column[ia] = values_[ia * nb + ib];
      const auto d = differentiate(a_, column);
      for (std::size_t ia = 0; ia < na; ++ia) da_[ia * nb + ib] = d[ia];
    }
  }
  if (nb >= 3) {
    for (std::size_t ia = 0; ia < na; ++ia) {
      std::vector<double> row(values_.begin() + ia * nb, values_.begin() + (ia + 1) * nb);
      const auto d = differentiate(b_, row);
      std::copy(d.begin(), d.end(), db_.begin() + ia * nb);
    }
  }
}

std::vector<double> Table2D::differentiate(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  std::vector<double> d(n);
  // Three-point Lagrange derivative; exact for quadratics on uneven spacing.
  auto three_point = [&](std::size_t k0, std::size_t at) {
    const double x0 = x[k0], x1 = x[k0 + 1], x2 = x[k0 + 2], xa = x[at];
    const double l0 = ((xa - x1) + (xa - x2)) / ((x0 - x1) * (x0 - x2));
    const double l1 = ((xa - x0) + (xa - x2)) / ((x1 - x0) * (x1 - x2));
    const double l2 = ((xa - x0) + (xa - x1)) / ((x2 - x0) * (x2 - x1));
    return l0 * f[k0] + l1 * f[k0 + 1] + l2 * f[k0 + 2];
  };
  d[0] = three_point(0, 0);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = three_point(k - 1, k);
  d[n - 1] = three_point(n - 3, n - 1);
  return d;
}

double Table2D::interpolate(const std::vector<double>& field, double a, double b) const {
  const auto [ia, sa] = locate(a_, a);
  const auto [ib, sb] = locate(b_, b);
  const std::size_t nb = b_.size();
  const int ia1 = a_.size() > 1 ? ia + 1 : ia;
  const int ib1 = nb > 1 ? ib + 1 : ib;
  const double f00 = field[ia * nb + ib], f01 = field[ia * nb + ib1];
  const double f10 = field[ia1 * nb + ib], f11 = field[ia1 * nb + ib1];
  return (1 - sa) * ((1 - sb) * f00 + sb * f01) + sa * ((1 - sb) * f10 + sb * f11);
}

double Table2D::operator()(double a, double b) const { return interpolate(values_, a, b); }
double Table2D::d_da(double a, double b) const { return interpolate(da_, a, b); }
double Table2D::d_db(double a, double b) const { return interpolate(db_, a, b); }

Table2D Table2D::read_csv(const std::string& path, const std::array<std::string, 3>& columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table '" + path + "'");
  std::string line;
  int line_no = 0;
  bool have_header = false;
  std::vector<double> a, b, v;
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split(t);
    if (!have_header) {
      if (cells.size() != 3 || cells[0] != columns[0] || cells[1] != columns[1] ||
          cells[2] != columns[2]) {
        throw ValidationError(path + ":" + std::to_string(line_no) + ": expected header '" +
                              columns[0] + "," + columns[1] + "," + columns[2] + "'");
      }
      have_header = true;
      continue;
    }
    if (cells.size() != 3) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": expected 3 columns");
    }
    std::array<double, 3> row{};
    for (int k = 0; k < 3; ++k) {
      try {
        std::size_t used = 0;
        row[k] = std::stod(cells[k], &used);
        if (used != cells[k].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ValidationError(path + ":" + std::to_string(line_no) + ": bad number '" + cells[k] + "'");
      }
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ValidationError(path + ": table has no data rows");
  for (const auto& r : rows) {
    if (a.empty() || a.back() != r[0]) a.push_back(r[0]);
  }
  const std::size_t nb = rows.size() / a.size();
  if (nb * a.size() != rows.size()) throw ValidationError(path + ": rows do not form a full lattice");
  for (std::size_t k = 0; k < nb; ++k) b.push_back(rows[k][1]);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k][0] != a[k / nb] || rows[k][1] != b[k % nb]) {
      throw ValidationError(path + ": row " + std::to_string(k + 1) +
                            " breaks the row-major lattice ordering");
    }
    v.push_back(rows[k][2]);
  }
  return Table2D(std::move(a), std::move(b), std::move(v));
}

}  // namespace crocco
