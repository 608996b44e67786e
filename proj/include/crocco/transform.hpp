#pragma once

#include <functional>
#include <span>
#include <vector>

namespace crocco {

/// Streamwise velocity profile u(y) at a fixed (x, t), with u(0) = 0 and u
/// increasing toward U. `du` may be left empty; a fourth-order centered
/// difference is used then.
struct VelocityProfile {
  std::function<double(double)> u;
  std::function<double(double)> du;
  double y_max = 50.0;  // search range for the inverse map
};

/// w(eta) = u_y / U sampled on eta_j = j * d_eta, j = 0..size-1 (eta < 1).
struct CroccoProfile {
  double d_eta = 0.0;
  std::vector<double> w;
  double eta(int j) const { return j * d_eta; }
};

/// Physical profile recovered from a Crocco profile: y_j and u_j = eta_j U.
struct PhysicalProfile {
  std::vector<double> y;
  std::vector<double> u;
};

/// Crocco transform of one profile on eta_j = j / n_eta, j = 0..n_eta-1.
/// Throws NumericalError naming the first interval where u is not increasing.
CroccoProfile to_crocco(const VelocityProfile& profile, double U, int n_eta);

/// Inverse transform: y(eta) = int_0^eta d eta' / w by the composite
/// trapezoid rule, u = eta U. Throws NumericalError if some w <= 0.
PhysicalProfile from_crocco(const CroccoProfile& profile, double U);

/// Same with an explicit w array (the y = 1 node, where w = 0, is dropped by
/// the caller).
PhysicalProfile from_crocco(std::span<const double> w, double d_eta, double U);

}  // namespace crocco
