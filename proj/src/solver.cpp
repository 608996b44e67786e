#include "crocco/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "crocco/errors.hpp"
#include "crocco/tridiagonal.hpp"

namespace crocco {

namespace {

constexpr int kMaxNewton = 50;
constexpr double kCflLimit = 0.9;

std::vector<double> trapezoid_weights(int n, double h) {
  std::vector<double> w(n + 1, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

}  // namespace

double cfl_number(const CroccoProblem& problem, double eps) {
  const auto& g = problem.grid;
  double worst = 0.0;
  for (int n = 0; n <= g.nt; ++n)
    for (int i = 0; i <= g.nx; ++i)
      for (int j = 0; j <= g.ny; ++j) {
        worst = std::max({worst, (problem.coeffs.a(n, i, j) + eps) / g.dx(),
                          std::abs(problem.coeffs.b(n, i, j)) / g.dy()});
      }
  return worst * g.dt();
}

void check_cfl(const CroccoProblem& problem, double eps) {
  const double cfl = cfl_number(problem, eps);
  if (cfl > kCflLimit) {
    std::ostringstream msg;
    msg << "time step violates the transport bound: CFL " << cfl << " > " << kCflLimit
        << " on grid " << problem.grid.id();
    throw ConfigError(msg.str());
  }
}

FieldSnapshot initial_snapshot(const CroccoProblem& problem, double eps) {
  FieldSnapshot s{0.0, eps, problem.w0};
  for (int i = 0; i <= problem.grid.nx; ++i) s.u(i, problem.grid.ny) = 0.0;
  return s;
}

FieldSnapshot step(const FieldSnapshot& state, const CroccoProblem& problem, double eps,
                   const Forcing& forcing, StepDiagnostics* diagnostics) {
  const auto& g = problem.grid;
  const int n = static_cast<int>(std::lround(state.t / g.dt()));
  if (n < 0 || n >= g.nt) throw ParameterError("step: state time outside [0, T)");
  const int np = n + 1;
  const double dx = g.dx(), dy = g.dy(), dt = g.dt();
  const double dy2 = dy * dy;
  const int m = g.ny - 1;  // interior unknowns j = 1..ny-1

  FieldSnapshot next{g.t(np), eps, Array2(g.nx + 1, g.ny + 1)};
  const Array2& u = state.u;

  for (int j = 0; j < g.ny; ++j) next.u(0, j) = problem.w1(np, j);
  next.u(0, g.ny) = 0.0;

  std::vector<double> lower(m), diag(m), upper(m), p(m), q(m);
  int worst_newton = 0;
  double cfl = 0.0;

  for (int i = 1; i <= g.nx; ++i) {
    for (int k = 0; k < m; ++k) {
      const int j = k + 1;
      const double diff = (u(i, j) + eps) * (u(i, j) + eps) / dy2;
      const double b = problem.coeffs.b(np, i, j);
      const double a = problem.coeffs.a(n, i, j) + eps;
      lower[k] = -diff;
      upper[k] = -diff;
      diag[k] = 1.0 / dt + 2.0 * diff + problem.coeffs.c(np, i, j);
      if (b > 0.0) {
        diag[k] += b / dy;
        lower[k] -= b / dy;
      } else {
        diag[k] -= b / dy;
        upper[k] += b / dy;
      }
      cfl = std::max({cfl, dt * a / dx, dt * std::abs(b) / dy});
      double rhs = u(i, j) / dt - a * (u(i, j) - u(i - 1, j)) / dx;
      if (forcing) rhs += forcing(g.x(i), g.y(j), g.t(n));
      p[k] = rhs;
      q[k] = 0.0;
    }
    // u(ny) = 0 closes the top row; the wall value s enters row j = 1 linearly,
    // so the interior solution is p + q s.
    const double wall_coupling = lower[0];
    q[0] = -wall_coupling;
    lower[0] = 0.0;
    upper[m - 1] = 0.0;
    const TridiagonalSolver solver(lower, diag, upper);
    solver.solve(p);
    solver.solve(q);

    // (s+eps) (-3 s + 4 u1 - u2) / (2 dy) = v0 (s+eps) + P with u1, u2 linear in s.
    const double alpha = 4.0 * p[0] - p[1];
    const double beta = 4.0 * q[0] - q[1] - 3.0;
    const double v0 = problem.v0(np, i);
    const double src = problem.coeffs.px_over_u(np, i);
    double s = u(i, 0);
    int iter = 0;
    for (;; ++iter) {
      if (iter == kMaxNewton) {
        std::ostringstream msg;
        msg << "wall Newton solve did not converge in " << kMaxNewton << " iterations at column i="
            << i << " (x=" << g.x(i) << ")";
        throw NumericalError(msg.str());
      }
      const double grad = (alpha + beta * s) / (2.0 * dy);
      const double f = (s + eps) * grad - v0 * (s + eps) - src;
      const double df = grad + (s + eps) * beta / (2.0 * dy) - v0;
      if (df == 0.0 || !std::isfinite(df)) {
        throw NumericalError("wall Newton solve hit a singular derivative at column i=" +
                             std::to_string(i));
      }
      const double ds = f / df;
      s -= ds;
      if (std::abs(ds) <= 1e-14 * (1.0 + std::abs(s))) break;
    }
    worst_newton = std::max(worst_newton, iter + 1);

    next.u(i, 0) = s;
    for (int k = 0; k < m; ++k) next.u(i, k + 1) = p[k] + q[k] * s;
    next.u(i, g.ny) = 0.0;
  }

  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 0; j <= g.ny; ++j) {
      if (!(next.u(i, j) >= -1e-12) || !std::isfinite(next.u(i, j))) {
        std::ostringstream msg;
        msg << "negative or non-finite value u=" << next.u(i, j) << " at (x=" << g.x(i)
            << ", y=" << g.y(j) << ")";
        throw NumericalError(msg.str());
      }
    }
  }
  if (diagnostics) *diagnostics = {worst_newton, cfl};
  return next;
}

FieldHistory solve(const CroccoProblem& problem, double eps, const Forcing& forcing) {
  if (!(eps > 0.0)) throw ParameterError("viscosity eps must be positive");
  check_cfl(problem, eps);
  const auto& g = problem.grid;
  FieldHistory h{g, eps, {}, {}};
  h.snapshots.reserve(g.nt + 1);
  h.diagnostics.reserve(g.nt);
  h.snapshots.push_back(initial_snapshot(problem, eps));
  for (int n = 0; n < g.nt; ++n) {
    StepDiagnostics d;
    try {
      h.snapshots.push_back(step(h.snapshots.back(), problem, eps, forcing, &d));
    } catch (const NumericalError& e) {
      throw NumericalError("step " + std::to_string(n + 1) + " (t=" + std::to_string(g.t(n + 1)) +
                           "): " + e.what());
    }
    h.diagnostics.push_back(d);
  }
  return h;
}

double spacetime_l1(const FieldHistory& a, const FieldHistory& b) {
  if (!(a.grid == b.grid) || a.snapshots.size() != b.snapshots.size()) {
    throw ParameterError("spacetime_l1: histories live on different grids");
  }
  const auto& g = a.grid;
  const auto wx = trapezoid_weights(g.nx, g.dx());
  const auto wy = trapezoid_weights(g.ny, g.dy());
  const auto wt = trapezoid_weights(g.nt, g.dt());
  double total = 0.0;
  for (int n = 0; n <= g.nt; ++n) {
    double slab = 0.0;
    for (int i = 0; i <= g.nx; ++i)
      for (int j = 0; j <= g.ny; ++j) slab += wx[i] * wy[j] * std::abs(a.at(n)(i, j) - b.at(n)(i, j));
    total += wt[n] * slab;
  }
  return total;
}

ConvergenceTable viscosity_sweep(const CroccoProblem& problem, std::span<const double> eps_list,
                                 bool keep_runs) {
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw ParameterError("eps_list entries must be positive");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) {
      throw ParameterError("eps_list must be strictly decreasing");
    }
  }
  // Members are independent; each solve is deterministic, so the schedule
  // cannot change the table.
  std::vector<std::future<FieldHistory>> jobs;
  for (double eps : eps_list) {
    jobs.push_back(std::async(std::launch::async, [&problem, eps] { return solve(problem, eps); }));
  }
  ConvergenceTable table;
  std::vector<std::string> errors(eps_list.size());
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    try {
      table.runs.emplace_back(jobs[k].get());
    } catch (const Error& e) {
      table.runs.emplace_back(std::nullopt);
      errors[k] = e.what();
    }
  }
  for (std::size_t k = 0; k + 1 < eps_list.size(); ++k) {
    ConvergenceRow row{eps_list[k], eps_list[k + 1], 0.0, true, {}};
    if (table.runs[k] && table.runs[k + 1]) {
      row.l1_diff = spacetime_l1(*table.runs[k], *table.runs[k + 1]);
    } else {
      row.ok = false;
      row.error = !errors[k].empty() ? errors[k] : errors[k + 1];
    }
    table.rows.push_back(row);
  }
  if (!keep_runs) {
    for (auto& r : table.runs) r.reset();
  }
  return table;
}

}  // namespace crocco
