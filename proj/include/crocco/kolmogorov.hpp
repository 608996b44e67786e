#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crocco/array.hpp"

namespace crocco {

/// A point z = (x, y, t); also used for the integration variable (xi, eta, tau).
struct KernelPoint {
  double x = 0.0, y = 0.0, t = 0.0;
};

enum class BoxKind { full, past, slab };

/// Anisotropic boxes centered at the origin:
///   full  B_r  = {|x| < r^3, |y| < r, |t| < r^2}
///   past  B_r^- = B_r with t < 0
///   slab  C_r  = {|x| < r^3, |y| < r} (no time)
struct Box {
  double r = 1.0;
  BoxKind kind = BoxKind::full;

  bool contains(const KernelPoint& z) const;
  /// 8 r^6, 4 r^6, 4 r^4.
  double volume() const;
};

/// Volume of a box counted on an n-per-axis cell-midpoint lattice of the
/// bounding box [-1.5 R, 1.5 R] per axis (time [-1.5 r^2, 0] for past boxes).
double counted_volume(const Box& box, int n);

/// Fundamental solution of d_t - d_yy + y d_x:
///   sqrt(3) / (2 pi s^2) exp(-(y-eta)^2 / (4 s) - 3 / s^3 (x - xi - s (y+eta)/2)^2),
/// s = t - tau > 0, and 0 for s <= 0.
double gamma0(const KernelPoint& z, const KernelPoint& zeta);

/// d gamma0 / d eta.
double gamma0_deta(const KernelPoint& z, const KernelPoint& zeta);

/// Mass of gamma0 at time separation s > 0, integrated over zeta (or over z
/// with `over_z`) by tensor Gauss-Legendre panels on the region where the
/// exponent exceeds -40.
double gamma0_mass(double s, const KernelPoint& fixed = {}, bool over_z = false);

/// Centered second-order difference of (d_t - d_yy + y d_x) gamma0 in z.
/// Returns 0 if the whole stencil lies in t <= tau; throws ParameterError if
/// t - tau < 10 h otherwise.
double l0_residual(const KernelPoint& z, const KernelPoint& zeta, double h);

/// delta_mu (x, y, t) = (mu^3 x, mu y, mu^2 t).
KernelPoint dilate(const KernelPoint& z, double mu);

/// |gamma0(delta_mu z, 0) - mu^-4 gamma0(z, 0)|.
double dilation_defect(const KernelPoint& z, double mu);

struct CutoffSpec {
  double theta = 0.01;  // in (0, 2^-6)
  double r = 0.009;
  double alpha1 = 0.04;  // time depth of the support slab, in (theta, 1/12)
  double beta = 0.9;
};

/// chi: 1 on [0, theta^(1/6) r], 0 on [r, inf), quintic smoothstep in between;
/// phi0 = chi((theta^2 x^2 - 6 t r^4)^(1/6)), phi1 = chi(theta |y|), phi = phi0 phi1.
class Cutoff {
 public:
  /// Throws ParameterError on an inadmissible spec.
  explicit Cutoff(const CutoffSpec& spec);

  const CutoffSpec& spec() const { return spec_; }
  double chi(double s) const;
  double chi_prime(double s) const;
  double chi_second(double s) const;
  /// Bound 1.875 / ((1 - theta^(1/6)) r) on |chi'|.
  double chi_prime_bound() const;

  double phi0(double x, double t) const;
  double phi1(double y) const;
  double phi(const KernelPoint& z) const { return phi0(z.x, z.t) * phi1(z.y); }
  double phi1_prime(double y) const;
  double phi1_second(double y) const;
  /// (d_t + y d_x) phi0 at (x, y, t).
  double transport_phi0(double x, double y, double t) const;

  /// Range [lo, hi] of chi's transition.
  double ramp_lo() const { return s0_; }
  double ramp_hi() const { return spec_.r; }

 private:
  CutoffSpec spec_;
  double s0_;
};

struct LemmaCheck {
  std::string item;  // "transport_sign", "unit_core", "support", "slab_inside", "strict_ramp", "chi_bounds"
  bool pass = false;
  double worst = 0.0;  // the tightest sampled margin
  std::string detail;
};

/// Samples every cut-off property on an n^3 lattice of the relevant set.
std::vector<LemmaCheck> certify_cutoff(const Cutoff& cutoff, int n = 33);

/// Builds and certifies a cut-off; throws ParameterError naming the first failed item.
Cutoff make_cutoff(const CutoffSpec& spec, int n = 33);

/// Field on the past unit box [-1,1] x [-1,1] x [-1,0] sampled at
/// (x_i, y_j, t_n); values indexed (n, i, j).
class BoxField {
 public:
  BoxField() = default;
  BoxField(int nx, int ny, int nt);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nt() const { return nt_; }
  double dx() const { return 2.0 / nx_; }
  double dy() const { return 2.0 / ny_; }
  double dt() const { return 1.0 / nt_; }
  double x(int i) const { return -1.0 + i * dx(); }
  double y(int j) const { return -1.0 + j * dy(); }
  double t(int n) const { return -1.0 + n * dt(); }

  double& operator()(int n, int i, int j) { return values_(n, i, j); }
  double operator()(int n, int i, int j) const { return values_(n, i, j); }
  const Array3& values() const { return values_; }

  /// Trilinear interpolation; arguments are clamped to the box.
  double sample(double x, double y, double t) const;
  double sample(const KernelPoint& z) const { return sample(z.x, z.y, z.t); }

  /// Applies f to every node value.
  BoxField map(const std::function<double(double)>& f) const;

 private:
  int nx_ = 0, ny_ = 0, nt_ = 0;
  Array3 values_;
};

/// log transforms of a non-negative field at level h in (0, 1/2):
///   poincare: ln+ (h / (h^(9/8) + u)),  bounded by ln h^(-1/8)
///   density:  ln+ (1 / (u + h^(9/8))),  bounded by ln h^(-9/8)
enum class LogVariant { poincare, density };

double log_transform(double u, double h, LogVariant variant);
double log_bound(double h, LogVariant variant);
/// Throws ParameterError unless 0 < h < 1/2.
BoxField log_subsolution(const BoxField& u, double h, LogVariant variant = LogVariant::poincare);

/// Measurable coefficient a(x, y, t) with 1/Lambda <= a <= Lambda.
struct RoughCoefficient {
  std::string kind;
  double lambda = 1.0;
  std::function<double(double, double, double)> a;
};

/// "constant" (a = 1), "checkerboard" (Lambda and 1/Lambda alternating on
/// cells of size cell^3 x cell x cell^2), "seeded-random" (log-uniform in
/// [1/Lambda, Lambda] on the same cells, from a 64-bit Mersenne twister).
/// Throws ParameterError on an unknown kind or Lambda < 1.
RoughCoefficient model_scenarios(const std::string& kind, double lambda, std::uint64_t seed = 1,
                                 double cell = 0.5);

enum class XBoundary { periodic, dirichlet };

/// u_t - (a u_y)_y + y u_x = 0 on the past unit box. `data` gives the initial
/// values at t = -1, the Dirichlet values on y = +-1 and, for dirichlet x
/// boundaries, the values on x = +-1.
struct ModelProblem {
  RoughCoefficient coefficient;
  std::function<double(double, double, double)> data;
  XBoundary x_boundary = XBoundary::periodic;
};

/// Implicit divergence-form y-diffusion, explicit upwind y u_x. Throws
/// ConfigError if dt max|y| / dx > 0.9.
BoxField solve_model(const ModelProblem& problem, int nx, int ny, int nt);

/// Named initial/boundary data for the model runs: "smooth" (positive,
/// periodic in x) and "half" (vanishes for y <= 0).
std::function<double(double, double, double)> model_data(const std::string& name);

/// The first integral of the weak Poincare construction at z:
///   int d_eta phi d_eta gamma0 w + gamma0 (d_tau + eta d_xi) phi w  over B^-_{r/theta}.
double mean_value_i1(const BoxField& w, const Cutoff& cutoff, const KernelPoint& z);

struct MeanValue {
  double i0 = 0.0;               // max of i1 over the lattice
  KernelPoint argmax;
  std::vector<double> i1;        // lattice order: t outer, then x, then y
};

/// I0 over an n^3 lattice (endpoints included) of the closure of B^-_{theta r}.
MeanValue mean_value(const BoxField& w, const Cutoff& cutoff, int n = 9);

struct PoincareResult {
  double lhs = 0.0;  // int_{B^-_{theta r}} ((w - I0)^+)^2
  double rhs = 0.0;  // theta^2 r^2 int_{B^-_{r/theta}} |w_y|^2
  double ratio = 0.0;
  double i0 = 0.0;
  bool vacuous = false;        // lhs = rhs = 0
  bool hard_violation = false; // lhs > 0 with rhs = 0
};

/// Throws ParameterError if r/theta > 1 (box outside the field).
PoincareResult weak_poincare_ratio(const BoxField& w, const Cutoff& cutoff, int n = 9);

struct DensityRow {
  double t = 0.0, h = 0.0, ratio = 0.0;
  bool pass = false;
};

struct DensityResult {
  bool hypothesis_met = false;
  double hypothesis_fraction = 0.0;  // mes{u >= 1} / mes B_r^- on the lattice
  double scale = 1.0;                // factor applied by normalize_for_density
  double min_ratio = 0.0;
  std::vector<DensityRow> rows;
  bool pass() const { return hypothesis_met && min_ratio >= 1.0 / 11.0; }
};

/// Scales a non-negative field so that at least half of B_r^- (on an n^3
/// midpoint lattice) has u >= 1. Returns the scale; throws NumericalError if
/// the field vanishes on the lattice median.
double normalize_for_density(const BoxField& u, double r, int n = 33);

/// mes{(x,y) in C_{beta r}: u(x,y,t) >= h} / mes C_{beta r} for t_samples
/// times in (-alpha r^2, 0) and every h; n x n lattice in space. The
/// hypothesis mes{u >= 1} >= mes B_r^- / 2 is measured first; if it fails no
/// rows are produced.
DensityResult density_ratio(const BoxField& u, double r, std::span<const double> h_list, double alpha,
                            double beta, int t_samples = 8, int n = 65);

struct OscillationRow {
  double r = 0.0, osc_small = 0.0, osc_big = 0.0, ratio = 0.0;
};

struct OscillationTable {
  std::vector<OscillationRow> rows;
  double beta_bar = 0.0;        // largest ratio
  double holder_exponent = 0.0; // least-squares slope of log Osc(B^-_r) against log r
};

/// Osc over B^-_{theta_bar r} and B^-_r for every r, on an n^3 lattice
/// (endpoints included). Throws ParameterError if a box leaves the field or
/// r_list is empty.
OscillationTable oscillation_table(const BoxField& u, double theta_bar, std::span<const double> r_list,
                                   int n = 17);

}  // namespace crocco
