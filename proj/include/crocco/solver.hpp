#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crocco/array.hpp"
#include "crocco/problem.hpp"

namespace crocco {

/// Optional source f(x, y, t) added to the right-hand side; empty means f = 0.
using Forcing = std::function<double(double, double, double)>;

/// u on every (x_i, y_j) node at one time level.
struct FieldSnapshot {
  double t = 0.0;
  double eps = 0.0;
  Array2 u;  // (i, j)
};

struct StepDiagnostics {
  int newton_iterations = 0;  // worst column of the step
  double cfl = 0.0;           // dt * max((a+eps)/dx, |b|/dy) at this step
};

struct FieldHistory {
  GridSpec grid;
  double eps = 0.0;
  std::vector<FieldSnapshot> snapshots;      // t_0 .. t_Nt
  std::vector<StepDiagnostics> diagnostics;  // one per step

  const Array2& at(int n) const { return snapshots[n].u; }
};

/// Largest CFL number dt * max((a+eps)/dx, |b|/dy) over the space-time grid.
double cfl_number(const CroccoProblem& problem, double eps);

/// Throws ConfigError if the explicit transport bound
/// dt <= 0.9 min(dx / max(a+eps), dy / max|b|) fails.
void check_cfl(const CroccoProblem& problem, double eps);

/// The initial snapshot: w0 on every node, 0 on y = 1.
FieldSnapshot initial_snapshot(const CroccoProblem& problem, double eps);

/// Advances the regularized problem
///   u_t - (u+eps)^2 u_yy + (a+eps) u_x + b u_y + c u = f
/// by one time step. Per x-column: implicit y-diffusion with the coefficient
/// frozen at the old level, implicit upwind b u_y and implicit c u, explicit
/// backward-difference x-transport and explicit forcing. The wall condition
///   (u+eps) u_y = v0 (u+eps) + dxP/U   at y = 0
/// uses the one-sided second-order gradient and is closed by a scalar Newton
/// solve for the wall value. Throws NumericalError on Newton failure or a
/// negative node value.
FieldSnapshot step(const FieldSnapshot& state, const CroccoProblem& problem, double eps,
                   const Forcing& forcing = {}, StepDiagnostics* diagnostics = nullptr);

/// Runs t = 0..T. Checks the CFL bound before stepping; step errors are
/// re-thrown with the failing time index.
FieldHistory solve(const CroccoProblem& problem, double eps, const Forcing& forcing = {});

/// Discrete L1(Q_T) distance of two histories on the same grid (trapezoid rule).
double spacetime_l1(const FieldHistory& a, const FieldHistory& b);

struct ConvergenceRow {
  double eps_hi = 0.0;
  double eps_lo = 0.0;
  double l1_diff = 0.0;
  bool ok = true;
  std::string error;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<std::optional<FieldHistory>> runs;  // one per eps, empty if the solve failed
};

/// Solves for every eps (strictly decreasing, positive) and tabulates
/// successive L1(Q_T) differences. A failed solve marks its rows failed.
ConvergenceTable viscosity_sweep(const CroccoProblem& problem, std::span<const double> eps_list,
                                 bool keep_runs = false);

}  // namespace crocco
