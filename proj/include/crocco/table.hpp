#pragma once

#include <array>
#include <string>
#include <vector>

namespace crocco {

/// Samples of a scalar on a rectilinear (a, b) lattice, read from a CSV file
/// with a three-column header such as `x,t,U`. Rows are ordered with the
/// second coordinate varying fastest. Evaluation is bilinear and clamps to
/// the lattice hull.
class Table2D {
 public:
  Table2D(std::vector<double> a, std::vector<double> b, std::vector<double> values);

  /// Reads a table and checks that the header matches `columns` exactly.
  static Table2D read_csv(const std::string& path, const std::array<std::string, 3>& columns);

  double operator()(double a, double b) const;

  /// Partial derivatives from centered second-order differences on the
  /// lattice (one-sided second order at the ends), interpolated bilinearly.
  double d_da(double a, double b) const;
  double d_db(double a, double b) const;

  const std::vector<double>& a_nodes() const { return a_; }
  const std::vector<double>& b_nodes() const { return b_; }
  double value(int ia, int ib) const { return values_[ia * b_.size() + ib]; }

 private:
  static std::vector<double> differentiate(const std::vector<double>& nodes,
                                           const std::vector<double>& f);
  double interpolate(const std::vector<double>& field, double a, double b) const;

  std::vector<double> a_, b_, values_, da_, db_;
};

}  // namespace crocco
