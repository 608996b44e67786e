#include "crocco/mms.hpp"

#include <cmath>
#include <numbers>

#include "crocco/errors.hpp"

namespace crocco {

ManufacturedField default_manufactured_field(double length) {
  const double k = std::numbers::pi / length;
  auto Y = [](double y) { return (1.0 - y) * std::exp(0.5 * y); };
  auto Yp = [](double y) { return -0.5 * (1.0 + y) * std::exp(0.5 * y); };
  auto Ypp = [](double y) { return -0.25 * (3.0 + y) * std::exp(0.5 * y); };
  auto X = [k](double x) { return 1.0 + 0.3 * std::sin(k * x); };
  auto Xp = [k](double x) { return 0.3 * k * std::cos(k * x); };
  auto Th = [](double t) { return std::exp(0.5 * t); };
  ManufacturedField f;
  f.u = [=](double x, double y, double t) { return Y(y) * X(x) * Th(t); };
  f.u_x = [=](double x, double y, double t) { return Y(y) * Xp(x) * Th(t); };
  f.u_y = [=](double x, double y, double t) { return Yp(y) * X(x) * Th(t); };
  f.u_yy = [=](double x, double y, double t) { return Ypp(y) * X(x) * Th(t); };
  f.u_t = [=](double x, double y, double t) { return 0.5 * Y(y) * X(x) * Th(t); };
  return f;
}

ManufacturedField linear_manufactured_field() {
  ManufacturedField f;
  f.u = [](double, double y, double t) { return (1.0 - y) * (1.0 + 0.25 * t); };
  f.u_x = [](double, double, double) { return 0.0; };
  f.u_y = [](double, double, double t) { return -(1.0 + 0.25 * t); };
  f.u_yy = [](double, double, double) { return 0.0; };
  f.u_t = [](double, double y, double) { return 0.25 * (1.0 - y); };
  return f;
}

ManufacturedProblem manufacture(const ManufacturedField& field, const ExternalFlow& flow, double eps) {
  ManufacturedProblem mp;
  mp.data.w0 = [field](double x, double y) { return field.u(x, y, 0.0); };
  mp.data.w1 = [field](double y, double t) { return field.u(0.0, y, t); };
  mp.data.v0 = [field, flow, eps](double x, double t) {
    // (u+eps) u_y = v0 (u+eps) + dxP/U at y = 0
    const double u = field.u(x, 0.0, t);
    return field.u_y(x, 0.0, t) - flow.dxP(x, t) / flow.U(x, t) / (u + eps);
  };
  mp.forcing = [field, flow, eps](double x, double y, double t) {
    const auto k = coefficients_at(flow, x, y, t);
    const double u = field.u(x, y, t);
    return field.u_t(x, y, t) - (u + eps) * (u + eps) * field.u_yy(x, y, t) +
           (k.a + eps) * field.u_x(x, y, t) + k.b * field.u_y(x, y, t) + k.c * u;
  };
  return mp;
}

double max_error(const FieldHistory& history, const ManufacturedField& field) {
  const auto& g = history.grid;
  double e = 0.0;
  for (int n = 0; n <= g.nt; ++n)
    for (int i = 0; i <= g.nx; ++i)
      for (int j = 0; j <= g.ny; ++j)
        e = std::max(e, std::abs(history.at(n)(i, j) - field.u(g.x(i), g.y(j), g.t(n))));
  return e;
}

const char* to_string(RefineAxis axis) {
  switch (axis) {
    case RefineAxis::x: return "x";
    case RefineAxis::y: return "y";
    default: return "t";
  }
}

namespace {

GridSpec refine(GridSpec g, RefineAxis axis, int factor) {
  if (axis == RefineAxis::x) g.nx *= factor;
  if (axis == RefineAxis::y) g.ny *= factor;
  if (axis == RefineAxis::t) g.nt *= factor;
  return g;
}

/// Max difference of two histories on the nodes of the coarser one; `fine` is
/// `ratio` times finer along `axis`.
double coarse_node_diff(const FieldHistory& coarse, const FieldHistory& fine, RefineAxis axis,
                        int ratio) {
  const auto& g = coarse.grid;
  const int sx = axis == RefineAxis::x ? ratio : 1;
  const int sy = axis == RefineAxis::y ? ratio : 1;
  const int st = axis == RefineAxis::t ? ratio : 1;
  double d = 0.0;
  for (int n = 0; n <= g.nt; ++n)
    for (int i = 0; i <= g.nx; ++i)
      for (int j = 0; j <= g.ny; ++j)
        d = std::max(d, std::abs(coarse.at(n)(i, j) - fine.at(n * st)(i * sx, j * sy)));
  return d;
}

}  // namespace

OrderResult refinement_order(const ManufacturedField& field, const ExternalFlow& flow,
                             const GridSpec& base, double eps, RefineAxis axis) {
  const auto mp = manufacture(field, flow, eps);
  std::vector<FieldHistory> runs;
  OrderResult r{axis};
  for (int level = 0; level < 3; ++level) {
    const auto g = refine(base, axis, 1 << level);
    const auto problem = assemble(flow, mp.data, g);
    runs.push_back(solve(problem, eps, mp.forcing));
    r.error[level] = max_error(runs.back(), field);
  }
  r.diff_coarse = coarse_node_diff(runs[0], runs[1], axis, 2);
  r.diff_fine = coarse_node_diff(runs[1], runs[2], axis, 2);
  if (!(r.diff_fine > 0.0)) throw NumericalError("refinement_order: finest difference vanished");
  r.order = std::log2(r.diff_coarse / r.diff_fine);
  return r;
}

}  // namespace crocco
