#pragma once

#include <span>
#include <vector>

namespace crocco {

/// Thomas-algorithm factorization of a tridiagonal matrix, reusable across
/// right-hand sides. Row k reads lower[k] x[k-1] + diag[k] x[k] + upper[k] x[k+1].
/// No pivoting: callers supply diagonally dominant (M-matrix) systems.
class TridiagonalSolver {
 public:
  TridiagonalSolver(std::span<const double> lower, std::span<const double> diag,
                    std::span<const double> upper);

  /// Overwrites rhs with the solution.
  void solve(std::span<double> rhs) const;

  std::size_t size() const { return pivot_.size(); }

 private:
  std::vector<double> lower_, upper_, pivot_;
};

}  // namespace crocco
