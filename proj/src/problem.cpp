#include "crocco/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crocco/errors.hpp"

namespace crocco {

PointCoefficients coefficients_at(const ExternalFlow& flow, double x, double y, double t) {
  const double U = flow.U(x, t), Ux = flow.dxU(x, t), Ut = flow.dtU(x, t);
  const double P = -(Ut + U * Ux);
  PointCoefficients k{};
  k.a = y * U;
  k.a_x = y * Ux;
  k.b = (1 - y * y) * Ux + (1 - y) * Ut / U;
  k.b_y = -2 * y * Ux - Ut / U;
  k.c = (1 - y) * Ux - P / U;
  k.c_alt = y * Ux + Ut / U;
  k.px_over_u = P / U;
  return k;
}

CoefficientFields coefficients(const ExternalFlow& flow, const GridSpec& grid) {
  const int nt = grid.nt + 1, nx = grid.nx + 1, ny = grid.ny + 1;
  CoefficientFields f{Array3(nt, nx, ny), Array3(nt, nx, ny), Array3(nt, nx, ny),
                      Array3(nt, nx, ny), Array2(nt, nx)};
  for (int n = 0; n < nt; ++n) {
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        const auto k = coefficients_at(flow, grid.x(i), grid.y(j), grid.t(n));
        f.a(n, i, j) = k.a;
        f.b(n, i, j) = k.b;
        f.c(n, i, j) = k.c;
        f.c_alt(n, i, j) = k.c_alt;
        if (j == 0) f.px_over_u(n, i) = k.px_over_u;
      }
      // The (1 - y) factor makes b vanish identically on y = 1.
      f.b(n, i, ny - 1) = 0.0;
    }
  }
  return f;
}

CroccoProblem assemble(const ExternalFlow& flow, const ProblemData& data, const GridSpec& grid) {
  grid.check();
  const auto pg = pressure_gradient(flow, grid);
  CroccoProblem p{flow, data, grid, coefficients(flow, grid), Array2(grid.nx + 1, grid.ny + 1),
                  Array2(grid.nt + 1, grid.ny + 1), Array2(grid.nt + 1, grid.nx + 1), pg.favorable};
  for (int i = 0; i <= grid.nx; ++i)
    for (int j = 0; j <= grid.ny; ++j) p.w0(i, j) = data.w0(grid.x(i), grid.y(j));
  for (int n = 0; n <= grid.nt; ++n) {
    for (int j = 0; j <= grid.ny; ++j) p.w1(n, j) = data.w1(grid.y(j), grid.t(n));
    for (int i = 0; i <= grid.nx; ++i) p.v0(n, i) = data.v0(grid.x(i), grid.t(n));
  }
  return p;
}

namespace {

std::string at(const char* a, double va, const char* b, double vb) {
  std::ostringstream s;
  s << "(" << a << "=" << va << ", " << b << "=" << vb << ")";
  return s.str();
}

// Tracks the worst sample of one condition so the report has one entry per condition.
struct Worst {
  double margin = 0.0;
  std::string location;
  void offer(double m, const std::string& loc) {
    if (m > margin) {
      margin = m;
      location = loc;
    }
  }
};

// Ratios w/(1-y) at y = 1 - 10^-k, k = 2..6, for one profile; a drift by more
// than a decade means no fixed C0 bounds the data near y = 1.
void probe_linear_bound(const std::function<double(double)>& profile, const std::string& where,
                        Worst& lower, Worst& upper) {
  const double q_far = profile(1.0 - 1e-2) / 1e-2;
  const double q_near = profile(1.0 - 1e-6) / 1e-6;
  if (q_far <= 0.0 || q_near <= 0.0) return;  // reported as a positivity failure instead
  if (q_near < 0.1 * q_far) lower.offer(q_far / q_near, where);
  if (q_near > 10.0 * q_far) upper.offer(q_near / q_far, where);
}

}  // namespace

ValidationReport validate(const ProblemData& data, const ExternalFlow& flow, const GridSpec& grid) {
  ValidationReport report;
  Worst flow_pos, w0_pos, w1_pos, suction, favorable, top, lower, upper;
  double c0 = 1.0;

  for (int n = 0; n <= grid.nt; ++n) {
    for (int i = 0; i <= grid.nx; ++i) {
      const double x = grid.x(i), t = grid.t(n);
      const double U = flow.U(x, t);
      if (!(U > 0.0)) {
        flow_pos.offer(std::abs(U) + 1e-300, at("x", x, "t", t));
        continue;
      }
      favorable.offer(flow.dxP(x, t), at("x", x, "t", t));
      suction.offer(data.v0(x, t), at("x", x, "t", t));
    }
  }
  auto ratio_bound = [&](double w, double y) {
    if (w > 0.0) c0 = std::max({c0, w / (1 - y), (1 - y) / w});
  };
  for (int i = 0; i <= grid.nx; ++i) {
    const double x = grid.x(i);
    for (int j = 0; j < grid.ny; ++j) {
      const double y = grid.y(j), w = data.w0(x, y);
      if (!(w > 0.0)) w0_pos.offer(std::abs(w) + 1e-300, at("x", x, "y", y));
      ratio_bound(w, y);
    }
    top.offer(std::abs(data.w0(x, 1.0)), at("x", x, "y", 1.0));
    probe_linear_bound([&](double y) { return data.w0(x, y); }, at("x", x, "t", 0.0), lower, upper);
  }
  for (int n = 0; n <= grid.nt; ++n) {
    const double t = grid.t(n);
    for (int j = 0; j < grid.ny; ++j) {
      const double y = grid.y(j), w = data.w1(y, t);
      if (!(w > 0.0)) w1_pos.offer(std::abs(w) + 1e-300, at("y", y, "t", t));
      ratio_bound(w, y);
    }
    top.offer(std::abs(data.w1(1.0, t)), at("y", 1.0, "t", t));
    probe_linear_bound([&](double y) { return data.w1(y, t); }, at("x", 0.0, "t", t), lower, upper);
  }
  report.c0 = c0;

  auto emit = [&](const Worst& w, const char* condition, const char* message, double tol = 0.0) {
    if (w.margin > tol) report.issues.push_back({condition, w.location, w.margin, message});
  };
  emit(flow_pos, "outer_flow_positive", "U(x,t) > 0 fails");
  emit(w0_pos, "initial_positive", "w0 > 0 (monotone class) fails below y = 1");
  emit(w1_pos, "inflow_positive", "w1 > 0 (monotone class) fails below y = 1");
  emit(suction, "suction_sign", "v0 <= 0 fails");
  emit(favorable, "favorable_pressure", "dxP <= 0 fails");
  emit(top, "top_dirichlet", "data must vanish at y = 1", 1e-12);
  emit(lower, "linear_bound_lower", "w / (1-y) -> 0 as y -> 1: no C0 with C0^-1 (1-y) < w");
  emit(upper, "linear_bound_upper", "w / (1-y) unbounded as y -> 1: no C0 with w < C0 (1-y)");
  return report;
}

}  // namespace crocco
