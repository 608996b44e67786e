#pragma once

#include <functional>
#include <string>

#include "crocco/array.hpp"
#include "crocco/grid.hpp"

namespace crocco {

using ScalarField2 = std::function<double(double, double)>;

/// Outer Euler trace U(x,t) with its first derivatives on [0,L] x [0,T].
struct ExternalFlow {
  std::string name;
  ScalarField2 U;
  ScalarField2 dxU;
  ScalarField2 dtU;
  double length = 1.0;
  double horizon = 1.0;

  /// Bernoulli pressure gradient -(dtU + U dxU) at a point.
  double dxP(double x, double t) const { return -(dtU(x, t) + U(x, t) * dxU(x, t)); }
};

ExternalFlow uniform_flow(double length, double horizon);       // U = 1
ExternalFlow accelerating_flow(double length, double horizon);  // U = 1 + t
ExternalFlow decelerating_flow(double length, double horizon);  // U = 1 - x/4 (adverse)

/// Flow from a `x,t,U` table; derivatives come from second-order differences.
ExternalFlow flow_from_table(const std::string& path, double length, double horizon);

/// Built-in by name: "uniform", "accelerating", "decelerating".
ExternalFlow builtin_flow(const std::string& name, double length, double horizon);

/// Sampled pressure gradient dxP on the (t, x) nodes of a grid.
struct PressureGradient {
  Array2 dxP;  // rows: t_n, cols: x_i
  bool favorable = true;
};

/// Samples dxP = -(dtU + U dxU) on the grid's (x,t) nodes and sets the
/// favorable flag (dxP <= 0 everywhere). Throws ValidationError naming the
/// first sample with U <= 0.
PressureGradient pressure_gradient(const ExternalFlow& flow, const GridSpec& grid);

/// Largest deviation between the supplied derivatives and centered
/// differences of U with step h, over a 9x9 interior sample of the domain.
double derivative_consistency(const ExternalFlow& flow, double h);

}  // namespace crocco
