#include "crocco/flow.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "crocco/errors.hpp"
#include "crocco/table.hpp"

namespace crocco {

ExternalFlow uniform_flow(double length, double horizon) {
  return {"uniform", [](double, double) { return 1.0; }, [](double, double) { return 0.0; },
          [](double, double) { return 0.0; }, length, horizon};
}

ExternalFlow accelerating_flow(double length, double horizon) {
  return {"accelerating", [](double, double t) { return 1.0 + t; },
          [](double, double) { return 0.0; }, [](double, double) { return 1.0; }, length, horizon};
}

ExternalFlow decelerating_flow(double length, double horizon) {
  return {"decelerating", [](double x, double) { return 1.0 - 0.25 * x; },
          [](double, double) { return -0.25; }, [](double, double) { return 0.0; }, length,
          horizon};
}

ExternalFlow flow_from_table(const std::string& path, double length, double horizon) {
  auto table = std::make_shared<const Table2D>(Table2D::read_csv(path, {"x", "t", "U"}));
  ExternalFlow flow;
  flow.name = "custom-table";
  flow.U = [table](double x, double t) { return (*table)(x, t); };
  flow.dxU = [table](double x, double t) { return table->d_da(x, t); };
  flow.dtU = [table](double x, double t) { return table->d_db(x, t); };
  flow.length = length;
  flow.horizon = horizon;
  return flow;
}

ExternalFlow builtin_flow(const std::string& name, double length, double horizon) {
  if (name == "uniform") return uniform_flow(length, horizon);
  if (name == "accelerating") return accelerating_flow(length, horizon);
  if (name == "decelerating") return decelerating_flow(length, horizon);
  throw ConfigError("unknown flow '" + name + "'");
}

PressureGradient pressure_gradient(const ExternalFlow& flow, const GridSpec& grid) {
  PressureGradient out{Array2(grid.nt + 1, grid.nx + 1), true};
  for (int n = 0; n <= grid.nt; ++n) {
    for (int i = 0; i <= grid.nx; ++i) {
      const double x = grid.x(i), t = grid.t(n);
      const double u = flow.U(x, t);
      if (!(u > 0.0) || !std::isfinite(u)) {
        std::ostringstream msg;
        msg << "external flow U must be positive: U(" << x << ", " << t << ") = " << u;
        throw ValidationError(msg.str());
      }
      const double p = flow.dxP(x, t);
      if (!std::isfinite(p)) throw ValidationError("non-finite derivative of U");
      out.dxP(n, i) = p;
      if (p > 0.0) out.favorable = false;
    }
  }
  return out;
}

double derivative_consistency(const ExternalFlow& flow, double h) {
  double worst = 0.0;
  for (int a = 1; a <= 9; ++a) {
    for (int b = 1; b <= 9; ++b) {
      const double x = flow.length * a / 10.0, t = flow.horizon * b / 10.0;
      const double fdx = (flow.U(x + h, t) - flow.U(x - h, t)) / (2 * h);
      const double fdt = (flow.U(x, t + h) - flow.U(x, t - h)) / (2 * h);
      worst = std::max({worst, std::abs(fdx - flow.dxU(x, t)), std::abs(fdt - flow.dtU(x, t))});
    }
  }
  return worst;
}

}  // namespace crocco
