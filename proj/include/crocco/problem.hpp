#pragma once

#include <string>
#include <vector>

#include "crocco/array.hpp"
#include "crocco/flow.hpp"
#include "crocco/grid.hpp"

namespace crocco {

/// Initial, inflow and wall-suction data of the Crocco-variable problem:
/// w0(x, y) at t = 0, w1(y, t) at x = 0, v0(x, t) at y = 0.
struct ProblemData {
  ScalarField2 w0;
  ScalarField2 w1;
  ScalarField2 v0;
};

/// Pointwise coefficients of the transformed equation
///   u_t - u^2 u_yy + a u_x + b u_y + c u = 0
/// together with the derivatives the weak form needs.
struct PointCoefficients {
  double a, b, c;
  double a_x, b_y;
  double c_alt;       // eta dxU + dtU / U, the alternative zeroth-order coefficient
  double px_over_u;   // dxP / U, the wall source
};

PointCoefficients coefficients_at(const ExternalFlow& flow, double x, double y, double t);

/// a, b, c sampled on every grid node, indexed (n, i, j), plus dxP/U on (n, i).
struct CoefficientFields {
  Array3 a, b, c, c_alt;
  Array2 px_over_u;
};

CoefficientFields coefficients(const ExternalFlow& flow, const GridSpec& grid);

/// Everything the solver needs: flow, data, grid and their samples.
struct CroccoProblem {
  ExternalFlow flow;
  ProblemData data;
  GridSpec grid;
  CoefficientFields coeffs;
  Array2 w0;  // (i, j)
  Array2 w1;  // (n, j)
  Array2 v0;  // (n, i)
  bool favorable = true;
};

/// Samples flow and data on the grid. Throws ValidationError if U <= 0 anywhere.
CroccoProblem assemble(const ExternalFlow& flow, const ProblemData& data, const GridSpec& grid);

struct ValidationIssue {
  std::string condition;  // e.g. "suction_sign", "linear_bound_lower"
  std::string location;
  double margin = 0.0;    // size of the violation
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  /// Tightest C0 with C0^-1 (1-y) <= w0, w1 <= C0 (1-y) on the sample grid, y = 1 excluded.
  double c0 = 1.0;
  bool ok() const { return issues.empty(); }
};

/// Checks the structural hypotheses on sampled data: positivity of U, w0, w1
/// (positivity of w is the monotone class), v0 <= 0, favorable pressure,
/// w = 0 at y = 1, and the two-sided linear bound near y = 1. Violations are
/// report entries, never exceptions.
ValidationReport validate(const ProblemData& data, const ExternalFlow& flow, const GridSpec& grid);

}  // namespace crocco
