#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace crocco {

/// Dense row-major 2-D array; the second index varies fastest.
class Array2 {
 public:
  Array2() = default;
  Array2(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return data_[index(r, c)]; }
  double operator()(int r, int c) const { return data_[index(r, c)]; }

  std::span<double> row(int r) { return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)}; }
  std::span<const double> row(int r) const {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t index(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return static_cast<std::size_t>(r) * cols_ + c;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Dense 3-D array indexed (outer, middle, inner).
class Array3 {
 public:
  Array3() = default;
  Array3(int n0, int n1, int n2, double fill = 0.0)
      : n0_(n0), n1_(n1), n2_(n2), data_(static_cast<std::size_t>(n0) * n1 * n2, fill) {}

  int extent(int d) const { return d == 0 ? n0_ : (d == 1 ? n1_ : n2_); }

  double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t index(int a, int b, int c) const {
    assert(a >= 0 && a < n0_ && b >= 0 && b < n1_ && c >= 0 && c < n2_);
    return (static_cast<std::size_t>(a) * n1_ + b) * n2_ + c;
  }

  int n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<double> data_;
};

}  // namespace crocco
