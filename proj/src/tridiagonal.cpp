#include "crocco/tridiagonal.hpp"

#include <cmath>

#include "crocco/errors.hpp"

namespace crocco {

TridiagonalSolver::TridiagonalSolver(std::span<const double> lower, std::span<const double> diag,
                                     std::span<const double> upper)
    : lower_(lower.begin(), lower.end()),
      upper_(upper.begin(), upper.end()),
      pivot_(diag.size()) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || n == 0) {
    throw ParameterError("tridiagonal: band sizes differ");
  }
  pivot_[0] = diag[0];
  for (std::size_t k = 1; k < n; ++k) {
    if (pivot_[k - 1] == 0.0) throw NumericalError("tridiagonal: zero pivot");
    pivot_[k] = diag[k] - lower_[k] * upper_[k - 1] / pivot_[k - 1];
  }
  if (pivot_[n - 1] == 0.0 || !std::isfinite(pivot_[n - 1])) {
    throw NumericalError("tridiagonal: singular system");
  }
}

void TridiagonalSolver::solve(std::span<double> rhs) const {
  const std::size_t n = pivot_.size();
  for (std::size_t k = 1; k < n; ++k) rhs[k] -= lower_[k] / pivot_[k - 1] * rhs[k - 1];
  rhs[n - 1] /= pivot_[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) rhs[k] = (rhs[k] - upper_[k] * rhs[k + 1]) / pivot_[k];
}

}  // namespace crocco
