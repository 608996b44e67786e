#include "crocco/kolmogorov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <memory>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include "crocco/errors.hpp"
#include "crocco/tridiagonal.hpp"

namespace crocco {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kTail = 40.0;  // exponent cut for kernel quadratures

using GL = boost::math::quadrature::gauss<double, 20>;
using GL8 = boost::math::quadrature::gauss<double, 8>;

/// Gauss-Hermite rule for int e^{-q^2} g(q) dq by the Golub-Welsch eigenproblem.
struct Hermite {
  std::vector<double> nodes, weights;
  explicit Hermite(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    for (int k = 0; k < n; ++k) {
      nodes.push_back(es.eigenvalues()(k));
      const double v = es.eigenvectors()(0, k);
      weights.push_back(std::sqrt(std::numbers::pi) * v * v);
    }
  }
};

const Hermite& hermite8() {
  static const Hermite h(8);
  return h;
}

/// Gauss-Legendre over [a, b] split into `pieces` equal panels.
template <class F>
double panels(F&& f, double a, double b, int pieces) {
  if (!(b > a)) return 0.0;
  const double w = (b - a) / pieces;
  double s = 0.0;
  for (int k = 0; k < pieces; ++k) s += GL::integrate(f, a + k * w, a + (k + 1) * w);
  return s;
}

double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep_d(double s) { return 30.0 * s * s * (1.0 - s) * (1.0 - s); }
double smoothstep_dd(double s) { return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }

}  // namespace

bool Box::contains(const KernelPoint& z) const {
  const bool space = std::abs(z.x) < r * r * r && std::abs(z.y) < r;
  switch (kind) {
    case BoxKind::full: return space && std::abs(z.t) < r * r;
    case BoxKind::past: return space && z.t < 0.0 && z.t > -r * r;
    default: return space;
  }
}

double Box::volume() const {
  const double r4 = r * r * r * r;
  switch (kind) {
    case BoxKind::full: return 8.0 * r4 * r * r;
    case BoxKind::past: return 4.0 * r4 * r * r;
    default: return 4.0 * r4;
  }
}

double counted_volume(const Box& box, int n) {
  const double r = box.r;
  const double ex = 1.5 * r * r * r, ey = 1.5 * r;
  double t0 = -1.5 * r * r, t1 = 1.5 * r * r;
  if (box.kind == BoxKind::past) t1 = 0.0;
  const int nt = box.kind == BoxKind::slab ? 1 : n;
  const double hx = 2.0 * ex / n, hy = 2.0 * ey / n, ht = (t1 - t0) / nt;
  long count = 0;
  for (int a = 0; a < nt; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const KernelPoint z{-ex + (b + 0.5) * hx, -ey + (c + 0.5) * hy, t0 + (a + 0.5) * ht};
        if (box.contains(z)) ++count;
      }
  const double cell = hx * hy * (box.kind == BoxKind::slab ? 1.0 : ht);
  return count * cell;
}

double gamma0(const KernelPoint& z, const KernelPoint& zeta) {
  const double s = z.t - zeta.t;
  if (!(s > 0.0)) return 0.0;
  const double dy = z.y - zeta.y;
  const double d = z.x - zeta.x - 0.5 * s * (z.y + zeta.y);
  return kSqrt3 / (2.0 * std::numbers::pi * s * s) * std::exp(-dy * dy / (4.0 * s) - 3.0 * d * d / (s * s * s));
}

double gamma0_deta(const KernelPoint& z, const KernelPoint& zeta) {
  const double s = z.t - zeta.t;
  if (!(s > 0.0)) return 0.0;
  const double dy = z.y - zeta.y;
  const double d = z.x - zeta.x - 0.5 * s * (z.y + zeta.y);
  return gamma0(z, zeta) * (dy / (2.0 * s) + 3.0 * d / (s * s));
}

double gamma0_mass(double s, const KernelPoint& fixed, bool over_z) {
  if (!(s > 0.0)) throw ParameterError("gamma0_mass: s must be positive");
  const double half_y = std::sqrt(4.0 * kTail * s);
  const double half_x = std::sqrt(kTail * s * s * s / 3.0);
  const double c = fixed.y;
  auto inner = [&](double v) {
    // v is the free y-type variable; the x-type variable is centered on the shear line.
    KernelPoint z = fixed, zeta = fixed;
    double center;
    if (over_z) {
      zeta.t = fixed.t;
      z.t = fixed.t + s;
      z.y = v;
      center = fixed.x + 0.5 * s * (v + fixed.y);
    } else {
      z.t = fixed.t;
      zeta.t = fixed.t - s;
      zeta.y = v;
      center = fixed.x - 0.5 * s * (fixed.y + v);
    }
    auto f = [&](double u) {
      if (over_z) {
        z.x = u;
      } else {
        zeta.x = u;
      }
      return gamma0(z, zeta);
    };
    return panels(f, center - half_x, center + half_x, 8);
  };
  return panels(inner, c - half_y, c + half_y, 8);
}

double l0_residual(const KernelPoint& z, const KernelPoint& zeta, double h) {
  if (!(h > 0.0)) throw ParameterError("l0_residual: h must be positive");
  if (z.t + h <= zeta.t) return 0.0;
  if (z.t - zeta.t < 10.0 * h) {
    throw ParameterError("l0_residual: stencil too close to the kernel singularity (t - tau < 10 h)");
  }
  auto G = [&](double dx, double dy, double dt) { return gamma0({z.x + dx, z.y + dy, z.t + dt}, zeta); };
  const double gt = (G(0, 0, h) - G(0, 0, -h)) / (2.0 * h);
  const double gyy = (G(0, h, 0) - 2.0 * G(0, 0, 0) + G(0, -h, 0)) / (h * h);
  const double gx = (G(h, 0, 0) - G(-h, 0, 0)) / (2.0 * h);
  return gt - gyy + z.y * gx;
}

KernelPoint dilate(const KernelPoint& z, double mu) { return {mu * mu * mu * z.x, mu * z.y, mu * mu * z.t}; }

double dilation_defect(const KernelPoint& z, double mu) {
  const double m4 = mu * mu * mu * mu;
  return std::abs(gamma0(dilate(z, mu), {}) - gamma0(z, {}) / m4);
}

Cutoff::Cutoff(const CutoffSpec& spec) : spec_(spec) {
  if (!(spec.theta > 0.0 && spec.theta < 1.0 / 64.0)) {
    throw ParameterError("cutoff: theta must lie in (0, 2^-6)");
  }
  if (!(spec.r > 0.0 && spec.r <= 1.0)) throw ParameterError("cutoff: r must lie in (0, 1]");
  if (!(spec.beta > 0.0 && spec.beta < 1.0)) throw ParameterError("cutoff: beta must lie in (0, 1)");
  if (!(spec.alpha1 > 0.0 && spec.alpha1 < 1.0 / 12.0)) {
    throw ParameterError("cutoff: alpha1 must lie in (0, 1/12)");
  }
  s0_ = std::pow(spec.theta, 1.0 / 6.0) * spec.r;
}

double Cutoff::chi(double s) const {
  if (s <= s0_) return 1.0;
  if (s >= spec_.r) return 0.0;
  return 1.0 - smoothstep((s - s0_) / (spec_.r - s0_));
}

double Cutoff::chi_prime(double s) const {
  if (s <= s0_ || s >= spec_.r) return 0.0;
  return -smoothstep_d((s - s0_) / (spec_.r - s0_)) / (spec_.r - s0_);
}

double Cutoff::chi_second(double s) const {
  if (s <= s0_ || s >= spec_.r) return 0.0;
  const double w = spec_.r - s0_;
  return -smoothstep_dd((s - s0_) / w) / (w * w);
}

double Cutoff::chi_prime_bound() const { return 1.875 / (spec_.r - s0_); }

double Cutoff::phi0(double x, double t) const {
  const double r = spec_.r;
  const double S = std::max(0.0, spec_.theta * spec_.theta * x * x - 6.0 * t * r * r * r * r);
  return chi(std::pow(S, 1.0 / 6.0));
}

double Cutoff::phi1(double y) const { return chi(spec_.theta * std::abs(y)); }

double Cutoff::phi1_prime(double y) const {
  const double sgn = y < 0.0 ? -1.0 : 1.0;
  return spec_.theta * sgn * chi_prime(spec_.theta * std::abs(y));
}

double Cutoff::phi1_second(double y) const {
  return spec_.theta * spec_.theta * chi_second(spec_.theta * std::abs(y));
}

double Cutoff::transport_phi0(double x, double y, double t) const {
  const double r = spec_.r, th2 = spec_.theta * spec_.theta;
  const double r4 = r * r * r * r;
  const double S = th2 * x * x - 6.0 * t * r4;
  if (!(S > 0.0)) return 0.0;
  const double root = std::pow(S, 1.0 / 6.0);
  const double cp = chi_prime(root);
  if (cp == 0.0) return 0.0;
  return cp * root / (6.0 * S) * (2.0 * th2 * x * y - 6.0 * r4);
}

std::vector<LemmaCheck> certify_cutoff(const Cutoff& c, int n) {
  const auto& sp = c.spec();
  const double r = sp.r, th = sp.theta;
  auto lin = [n](double a, double b, int k) { return n == 1 ? 0.5 * (a + b) : a + (b - a) * k / (n - 1); };
  std::vector<LemmaCheck> out;

  {  // (d_t + y d_x) phi0 >= 0 on Q_theta^-
    LemmaCheck chk{"transport_sign", false, 0.0, ""};
    double worst = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          const double t = lin(-r * r, 0.0, a), x = lin(-r * r * r / th, r * r * r / th, b);
          const double y = lin(-r / th, r / th, d);
          worst = std::min(worst, c.transport_phi0(x, y, t));
        }
    chk.worst = worst;
    chk.pass = worst >= -1e-12;
    chk.detail = "min of (d_t + y d_x) phi0 over Q_theta^-";
    out.push_back(chk);
  }
  {  // phi = 1 on the closure of B^-_{theta r}
    LemmaCheck chk{"unit_core", false, 0.0, ""};
    const double q = th * r;
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          const KernelPoint z{lin(-q * q * q, q * q * q, b), lin(-q, q, d), lin(-q * q, 0.0, a)};
          worst = std::max(worst, std::abs(c.phi(z) - 1.0));
        }
    chk.worst = worst;
    chk.pass = worst == 0.0;
    chk.detail = "max |phi - 1| on B^-_{theta r}";
    out.push_back(chk);
  }
  {  // supp phi in t <= 0 lies in Q_theta^-: phi = 0 on lattice points of a doubled box outside it
    LemmaCheck chk{"support", false, 0.0, ""};
    double worst = 0.0;
    const double X = 2.0 * r * r * r / th, Y = 2.0 * r / th, T = 2.0 * r * r;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          const KernelPoint z{lin(-X, X, b), lin(-Y, Y, d), lin(-T, 0.0, a)};
          const bool in_q = z.t >= -r * r && std::abs(z.y) <= r / th && std::abs(z.x) <= r * r * r / th;
          if (!in_q) worst = std::max(worst, c.phi(z));
        }
    chk.worst = worst;
    chk.pass = worst == 0.0;
    chk.detail = "max phi outside Q_theta^- (t <= 0)";
    out.push_back(chk);
  }
  {  // {-alpha1 r^2 <= t <= 0} x C_{beta r} inside supp phi
    LemmaCheck chk{"slab_inside", false, 0.0, ""};
    double worst = 1.0;
    const double br = sp.beta * r;
    // C_{beta r} is open: sample the interior lattice.
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          const double fx = (b + 0.5) / n, fy = (d + 0.5) / n;
          const KernelPoint z{(2.0 * fx - 1.0) * br * br * br, (2.0 * fy - 1.0) * br, lin(-sp.alpha1 * r * r, 0.0, a)};
          worst = std::min(worst, c.phi(z));
        }
    chk.worst = worst;
    chk.pass = worst > 0.0;
    chk.detail = "min phi on [-alpha1 r^2, 0] x C_{beta r}";
    out.push_back(chk);
  }
  {  // 0 < phi0 < 1 on [-alpha1 r^2, -theta r^2] x C_{beta r}, requires alpha1 > theta
    LemmaCheck chk{"strict_ramp", false, 0.0, ""};
    if (!(sp.alpha1 > th)) {
      chk.pass = false;
      chk.detail = "alpha1 must exceed theta";
    } else {
      double lo = 1.0, hi = 0.0;
      const double br = sp.beta * r;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double fx = (b + 0.5) / n;
          const double v = c.phi0((2.0 * fx - 1.0) * br * br * br, lin(-sp.alpha1 * r * r, -th * r * r, a));
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      chk.worst = std::min(lo, 1.0 - hi);
      chk.pass = lo > 0.0 && hi < 1.0;
      chk.detail = "min of phi0 and 1 - phi0 on [-alpha1 r^2, -theta r^2] x C_{beta r}";
    }
    out.push_back(chk);
  }
  {  // 0 <= -chi' <= 2 / ((1 - theta^(1/6)) r), 0 <= chi <= 1
    LemmaCheck chk{"chi_bounds", false, 0.0, ""};
    const double bound = 2.0 / ((1.0 - std::pow(th, 1.0 / 6.0)) * r);
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    const int m = 16 * n;
    for (int k = 0; k <= m; ++k) {
      const double s = 1.2 * r * k / m;
      const double cp = c.chi_prime(s), v = c.chi(s);
      ok = ok && cp <= 0.0 && -cp <= bound && v >= 0.0 && v <= 1.0;
      worst = std::min(worst, bound + cp);
    }
    chk.worst = worst;
    chk.pass = ok;
    chk.detail = "min of 2/((1-theta^(1/6)) r) - |chi'|";
    out.push_back(chk);
  }
  return out;
}

Cutoff make_cutoff(const CutoffSpec& spec, int n) {
  Cutoff c(spec);
  for (const auto& chk : certify_cutoff(c, n)) {
    if (!chk.pass) {
      throw ParameterError("cut-off property '" + chk.item + "' fails: " + chk.detail +
                           " = " + std::to_string(chk.worst));
    }
  }
  return c;
}

BoxField::BoxField(int nx, int ny, int nt) : nx_(nx), ny_(ny), nt_(nt), values_(nt + 1, nx + 1, ny + 1) {
  if (nx < 4 || ny < 4 || nt < 4) throw ConfigError("box field: every count must be at least 4");
}

double BoxField::sample(double x, double y, double t) const {
  auto locate = [](double v, double lo, double h, int n, int& k, double& f) {
    double p = (v - lo) / h;
    p = std::clamp(p, 0.0, static_cast<double>(n));
    k = std::min(static_cast<int>(p), n - 1);
    f = p - k;
  };
  int i, j, n;
  double fx, fy, ft;
  locate(x, -1.0, dx(), nx_, i, fx);
  locate(y, -1.0, dy(), ny_, j, fy);
  locate(t, -1.0, dt(), nt_, n, ft);
  auto bil = [&](int m) {
    const double a = values_(m, i, j) * (1 - fy) + values_(m, i, j + 1) * fy;
    const double b = values_(m, i + 1, j) * (1 - fy) + values_(m, i + 1, j + 1) * fy;
    return a * (1 - fx) + b * fx;
  };
  return bil(n) * (1 - ft) + bil(n + 1) * ft;
}

BoxField BoxField::map(const std::function<double(double)>& f) const {
  BoxField out(nx_, ny_, nt_);
  for (int n = 0; n <= nt_; ++n)
    for (int i = 0; i <= nx_; ++i)
      for (int j = 0; j <= ny_; ++j) out(n, i, j) = f(values_(n, i, j));
  return out;
}

double log_transform(double u, double h, LogVariant variant) {
  const double h98 = std::pow(h, 9.0 / 8.0);
  const double v = variant == LogVariant::poincare ? std::log(h / (h98 + u)) : -std::log(u + h98);
  return std::max(0.0, v);
}

double log_bound(double h, LogVariant variant) {
  return variant == LogVariant::poincare ? std::log(std::pow(h, -1.0 / 8.0)) : std::log(std::pow(h, -9.0 / 8.0));
}

BoxField log_subsolution(const BoxField& u, double h, LogVariant variant) {
  if (!(h > 0.0 && h < 0.5)) throw ParameterError("log_subsolution: h must lie in (0, 1/2)");
  return u.map([h, variant](double v) {
    if (v < 0.0) throw ParameterError("log_subsolution: field must be non-negative");
    return log_transform(v, h, variant);
  });
}

RoughCoefficient model_scenarios(const std::string& kind, double lambda, std::uint64_t seed, double cell) {
  if (!(lambda >= 1.0)) throw ParameterError("rough coefficient: Lambda must be at least 1");
  if (!(cell > 0.0)) throw ParameterError("rough coefficient: cell size must be positive");
  const double cx = cell * cell * cell, cy = cell, ct = cell * cell;
  auto index = [=](double x, double y, double t) {
    return std::array<long, 3>{static_cast<long>(std::floor(x / cx)), static_cast<long>(std::floor(y / cy)),
                               static_cast<long>(std::floor(t / ct))};
  };
  if (kind == "constant") return {kind, lambda, [](double, double, double) { return 1.0; }};
  if (kind == "checkerboard") {
    return {kind, lambda, [=](double x, double y, double t) {
              const auto k = index(x, y, t);
              return ((k[0] + k[1] + k[2]) % 2 == 0) ? lambda : 1.0 / lambda;
            }};
  }
  if (kind == "seeded-random") {
    // Cells covering [-1,1] x [-1,1] x [-1,0], filled in a fixed order.
    const long nx = static_cast<long>(std::ceil(2.0 / cx)) + 2, ny = static_cast<long>(std::ceil(2.0 / cy)) + 2;
    const long nt = static_cast<long>(std::ceil(1.0 / ct)) + 2;
    auto table = std::make_shared<std::vector<double>>(nx * ny * nt);
    std::mt19937_64 rng(seed);
    const double ll = std::log(lambda);
    for (auto& v : *table) {
      const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      v = std::exp(ll * (2.0 * unit - 1.0));
    }
    const long ox = nx / 2, oy = ny / 2, ot = nt - 1;
    return {kind, lambda, [=](double x, double y, double t) {
              const auto k = index(x, y, t);
              const long a = std::clamp(k[0] + ox, 0L, nx - 1), b = std::clamp(k[1] + oy, 0L, ny - 1);
              const long c = std::clamp(k[2] + ot, 0L, nt - 1);
              return (*table)[(c * nx + a) * ny + b];
            }};
  }
  throw ParameterError("unknown rough coefficient kind '" + kind + "'");
}

std::function<double(double, double, double)> model_data(const std::string& name) {
  const double pi = std::numbers::pi;
  if (name == "smooth") {
    return [pi](double x, double y, double) { return 1.0 + 0.5 * std::sin(pi * (y + 0.3)) + 0.25 * std::cos(pi * x); };
  }
  if (name == "half") {
    return [pi](double x, double y, double) {
      return y > 0.0 ? std::sin(pi * y) * (1.0 + 0.25 * std::cos(pi * x)) : 0.0;
    };
  }
  if (name == "linear") return [](double, double y, double) { return 1.0 - y; };
  throw ParameterError("unknown model data '" + name + "'");
}

BoxField solve_model(const ModelProblem& problem, int nx, int ny, int nt) {
  BoxField u(nx, ny, nt);
  const double dx = u.dx(), dy = u.dy(), dt = u.dt();
  if (dt / dx > 0.9) {
    std::ostringstream msg;
    msg << "model solve violates the transport bound: dt max|y| / dx = " << dt / dx << " > 0.9";
    throw ConfigError(msg.str());
  }
  const auto& data = problem.data;
  const auto& a = problem.coefficient.a;
  const bool periodic = problem.x_boundary == XBoundary::periodic;
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) u(0, i, j) = data(u.x(i), u.y(j), u.t(0));
  if (periodic)
    for (int j = 0; j <= ny; ++j) u(0, nx, j) = u(0, 0, j);

  const int m = ny - 1;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m);
  for (int n = 0; n < nt; ++n) {
    const double tn = u.t(n + 1);
    const int i_lo = periodic ? 0 : 1;
    const int i_hi = periodic ? nx - 1 : nx - 1;
    for (int i = i_lo; i <= i_hi; ++i) {
      const int im = periodic ? (i - 1 + nx) % nx : i - 1;
      const int ip = periodic ? (i + 1) % nx : i + 1;
      const double x = u.x(i);
      const double bot = data(x, -1.0, tn), top = data(x, 1.0, tn);
      for (int k = 0; k < m; ++k) {
        const int j = k + 1;
        const double y = u.y(j);
        const double am = a(x, y - 0.5 * dy, tn), ap = a(x, y + 0.5 * dy, tn);
        lower[k] = -am / (dy * dy);
        upper[k] = -ap / (dy * dy);
        diag[k] = 1.0 / dt + (am + ap) / (dy * dy);
        const double ux = y > 0.0 ? (u(n, i, j) - u(n, im, j)) / dx : (u(n, ip, j) - u(n, i, j)) / dx;
        rhs[k] = u(n, i, j) / dt - y * ux;
      }
      rhs[0] -= lower[0] * bot;
      rhs[m - 1] -= upper[m - 1] * top;
      lower[0] = 0.0;
      upper[m - 1] = 0.0;
      TridiagonalSolver(lower, diag, upper).solve(rhs);
      u(n + 1, i, 0) = bot;
      u(n + 1, i, ny) = top;
      for (int k = 0; k < m; ++k) u(n + 1, i, k + 1) = rhs[k];
    }
    if (periodic) {
      for (int j = 0; j <= ny; ++j) u(n + 1, nx, j) = u(n + 1, 0, j);
    } else {
      for (int j = 0; j <= ny; ++j) {
        u(n + 1, 0, j) = data(-1.0, u.y(j), tn);
        u(n + 1, nx, j) = data(1.0, u.y(j), tn);
      }
    }
  }
  return u;
}

double mean_value_i1(const BoxField& w, const Cutoff& c, const KernelPoint& z) {
  const auto& sp = c.spec();
  const double r = sp.r, th = sp.theta;
  const double R = r / th;  // outer box B^-_{r/theta}
  const double P = std::sqrt(kTail);
  const auto& gh = hermite8();

  // phi0 vanishes for tau <= -r^2/6 whatever xi is.
  const double tau_lo = -r * r / 6.0;
  if (!(z.t > tau_lo)) return 0.0;
  const double s_max = z.t - tau_lo;

  // Breakpoints in eta: grid faces and the ramps of phi1.
  std::vector<double> eta_breaks;
  for (int j = 0; j <= w.ny(); ++j) eta_breaks.push_back(w.y(j));
  for (double e : {c.ramp_lo() / th, c.ramp_hi() / th}) {
    eta_breaks.push_back(e);
    eta_breaks.push_back(-e);
  }
  std::sort(eta_breaks.begin(), eta_breaks.end());

  // Integrand over (p, q) at fixed tau; Gamma0 d xi d eta = e^{-p^2-q^2} dp dq / pi.
  auto slice = [&](double tau) {
    const double s = z.t - tau;
    if (!(s > 0.0)) return 0.0;
    const double rs = std::sqrt(s), ks = std::sqrt(s * s * s / 3.0);
    auto eta_of = [&](double p) { return z.y - 2.0 * rs * p; };
    auto in_p = [&](double p) {
      const double eta = eta_of(p);
      if (std::abs(eta) >= R) return 0.0;
      const double d1 = c.phi1_prime(eta), p1 = c.phi1(eta);
      double acc = 0.0;
      for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
        const double q = gh.nodes[k];
        const double xi = z.x - 0.5 * s * (z.y + eta) - ks * q;
        if (std::abs(xi) >= R * R * R) continue;
        const double wv = w.sample(xi, eta, tau);
        if (wv == 0.0) continue;
        // d_eta phi d_eta Gamma0 = phi0 phi1' Gamma0 (p + sqrt3 q) / sqrt(s)
        double term = 0.0;
        if (d1 != 0.0) term += c.phi0(xi, tau) * d1 * (p + kSqrt3 * q) / rs;
        if (p1 != 0.0) term += p1 * c.transport_phi0(xi, eta, tau);
        acc += gh.weights[k] * term * wv;
      }
      return std::exp(-p * p) * acc / std::numbers::pi;
    };
    // Panels in p aligned with eta breakpoints (eta decreases in p).
    std::vector<double> cuts{-P, P};
    for (double e : eta_breaks) {
      const double p = (z.y - e) / (2.0 * rs);
      if (p > -P && p < P) cuts.push_back(p);
    }
    for (double p : {-2.0, 0.0, 2.0}) cuts.push_back(p);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (cuts[k + 1] - cuts[k] < 1e-14) continue;
      total += GL8::integrate(in_p, cuts[k], cuts[k + 1]);
    }
    return total;
  };

  // tau panels through v = (-6 tau / r^2)^(1/6), which straightens the ramp of phi0.
  // The ramp reaches to -theta r^2/6 at xi = 0; sheared xi extends it slightly.
  const double eta_b = std::abs(z.y) + std::sqrt(4.0 * kTail * s_max);
  const double xi_b = std::abs(z.x) + 0.5 * s_max * (std::abs(z.y) + eta_b) + std::sqrt(kTail * s_max * s_max * s_max / 3.0);
  const double r4 = r * r * r * r;
  const double tau_ramp = -th * r * r / 6.0;
  const double tau_top = std::min(z.t, std::max(tau_ramp, (th * th * xi_b * xi_b - th * r * r * r * r * r * r) / (6.0 * r4)));
  auto v_of = [r](double tau) { return std::pow(std::max(0.0, -6.0 * tau / (r * r)), 1.0 / 6.0); };
  auto f_v = [&](double v) {
    const double tau = -r * r * std::pow(v, 6.0) / 6.0;
    return slice(tau) * r * r * std::pow(v, 5.0);
  };
  std::vector<double> vcuts{v_of(tau_top), 1.0};
  const double v_ramp = std::pow(th, 1.0 / 6.0);
  if (v_ramp > vcuts[0] && v_ramp < 1.0) vcuts.push_back(v_ramp);
  for (int n = 0; n <= w.nt(); ++n) {
    const double tn = w.t(n);
    if (tn > tau_lo && tn < tau_top) vcuts.push_back(v_of(tn));
  }
  std::sort(vcuts.begin(), vcuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < vcuts.size(); ++k) {
    const double a = vcuts[k], b = vcuts[k + 1];
    if (b - a < 1e-15) continue;
    const int pieces = b - a > 0.2 ? 3 : 1;
    total += panels(f_v, a, b, pieces);
  }
  if (!std::isfinite(total)) throw NumericalError("mean value quadrature is not finite");
  return total;
}

MeanValue mean_value(const BoxField& w, const Cutoff& c, int n) {
  const double q = c.spec().theta * c.spec().r;
  auto lin = [n](double a, double b, int k) { return a + (b - a) * k / (n - 1); };
  MeanValue mv;
  mv.i0 = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        const KernelPoint z{lin(-q * q * q, q * q * q, b), lin(-q, q, d), lin(-q * q, 0.0, a)};
        const double v = mean_value_i1(w, c, z);
        mv.i1.push_back(v);
        if (v > mv.i0) {
          mv.i0 = v;
          mv.argmax = z;
        }
      }
  return mv;
}

PoincareResult weak_poincare_ratio(const BoxField& w, const Cutoff& c, int n) {
  const auto& sp = c.spec();
  const double R = sp.r / sp.theta, q = sp.theta * sp.r;
  if (R > 1.0) throw ParameterError("weak Poincare: r / theta must not exceed 1");
  PoincareResult res;
  res.i0 = mean_value(w, c, n).i0;

  // LHS: midpoint lattice of B^-_{theta r}.
  double acc = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        const KernelPoint z{(-1.0 + (2.0 * b + 1.0) / n) * q * q * q, (-1.0 + (2.0 * d + 1.0) / n) * q,
                            -q * q * (a + 0.5) / n};
        const double e = std::max(0.0, w.sample(z) - res.i0);
        acc += e * e;
      }
  res.lhs = Box{q, BoxKind::past}.volume() * acc / (static_cast<double>(n) * n * n);

  // RHS: cell-averaged w_y on every grid cell, weighted by its overlap with B^-_R.
  auto overlap = [](double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); };
  double grad = 0.0;
  const double R3 = R * R * R;
  for (int m = 0; m < w.nt(); ++m) {
    const double ot = overlap(w.t(m), w.t(m + 1), -R * R, 0.0);
    if (ot == 0.0) continue;
    for (int i = 0; i < w.nx(); ++i) {
      const double ox = overlap(w.x(i), w.x(i + 1), -R3, R3);
      if (ox == 0.0) continue;
      for (int j = 0; j < w.ny(); ++j) {
        const double oy = overlap(w.y(j), w.y(j + 1), -R, R);
        if (oy == 0.0) continue;
        const double wy = 0.25 *
                          ((w(m, i, j + 1) - w(m, i, j)) + (w(m, i + 1, j + 1) - w(m, i + 1, j)) +
                           (w(m + 1, i, j + 1) - w(m + 1, i, j)) + (w(m + 1, i + 1, j + 1) - w(m + 1, i + 1, j))) /
                          w.dy();
        grad += ot * ox * oy * wy * wy;
      }
    }
  }
  res.rhs = sp.theta * sp.theta * sp.r * sp.r * grad;
  if (res.rhs > 0.0) {
    res.ratio = res.lhs / res.rhs;
  } else if (res.lhs > 0.0) {
    res.hard_violation = true;
    res.ratio = std::numeric_limits<double>::infinity();
  } else {
    res.vacuous = true;
  }
  return res;
}

double normalize_for_density(const BoxField& u, double r, int n) {
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(n) * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        samples.push_back(u.sample((-1.0 + (2.0 * b + 1.0) / n) * r * r * r, (-1.0 + (2.0 * d + 1.0) / n) * r,
                                   -r * r * (a + 0.5) / n));
      }
  // At least half of the samples must reach 1 after scaling: scale by the lower median.
  const std::size_t k = (samples.size() - 1) / 2;
  std::nth_element(samples.begin(), samples.begin() + k, samples.end(), std::greater<double>());
  const double med = samples[k];
  if (!(med > 0.0)) throw NumericalError("density normalization: field vanishes on half of B_r^-");
  double scale = 1.0 / med;
  while (med * scale < 1.0) scale = std::nextafter(scale, std::numeric_limits<double>::infinity());
  return scale;
}

DensityResult density_ratio(const BoxField& u, double r, std::span<const double> h_list, double alpha, double beta,
                            int t_samples, int n) {
  if (!(r > 0.0 && r <= 1.0)) throw ParameterError("density: r must lie in (0, 1]");
  DensityResult res;
  long hits = 0, total = 0;
  const int m = 33;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int d = 0; d < m; ++d) {
        const double v = u.sample((-1.0 + (2.0 * b + 1.0) / m) * r * r * r, (-1.0 + (2.0 * d + 1.0) / m) * r,
                                  -r * r * (a + 0.5) / m);
        hits += v >= 1.0;
        ++total;
      }
  res.hypothesis_fraction = static_cast<double>(hits) / total;
  res.hypothesis_met = res.hypothesis_fraction >= 0.5;
  if (!res.hypothesis_met) return res;
  res.min_ratio = std::numeric_limits<double>::infinity();
  const double br = beta * r;
  for (int k = 0; k < t_samples; ++k) {
    const double t = -alpha * r * r * (k + 0.5) / t_samples;
    for (double h : h_list) {
      long in = 0;
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          const double x = (-1.0 + (2.0 * b + 1.0) / n) * br * br * br, y = (-1.0 + (2.0 * d + 1.0) / n) * br;
          in += u.sample(x, y, t) >= h;
        }
      const double ratio = static_cast<double>(in) / (static_cast<double>(n) * n);
      res.rows.push_back({t, h, ratio, ratio >= 1.0 / 11.0});
      res.min_ratio = std::min(res.min_ratio, ratio);
    }
  }
  return res;
}

OscillationTable oscillation_table(const BoxField& u, double theta_bar, std::span<const double> r_list, int n) {
  if (r_list.empty()) throw ParameterError("oscillation: r_list is empty");
  if (!(theta_bar > 0.0 && theta_bar < 1.0)) throw ParameterError("oscillation: theta_bar must lie in (0, 1)");
  if (n < 2) throw ParameterError("oscillation: lattice needs at least 2 points per axis");
  auto osc = [&](double r) {
    if (!(r > 0.0 && r <= 1.0)) throw ParameterError("oscillation: box leaves the field");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          const double x = (-1.0 + 2.0 * b / (n - 1)) * r * r * r, y = (-1.0 + 2.0 * d / (n - 1)) * r;
          const double t = -r * r * a / (n - 1);
          const double v = u.sample(x, y, t);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
    return hi - lo;
  };
  OscillationTable tab;
  std::vector<double> lx, ly;
  for (double r : r_list) {
    OscillationRow row{r, osc(theta_bar * r), osc(r), 0.0};
    row.ratio = row.osc_big > 0.0 ? row.osc_small / row.osc_big : 0.0;
    tab.beta_bar = std::max(tab.beta_bar, row.ratio);
    if (row.osc_big > 0.0) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(row.osc_big));
    }
    tab.rows.push_back(row);
  }
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      mx += lx[k];
      my += ly[k];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      sxy += (lx[k] - mx) * (ly[k] - my);
      sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    tab.holder_exponent = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  return tab;
}

}  // namespace crocco
