#include "crocco/estimates.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "crocco/errors.hpp"
#include "crocco/transform.hpp"

namespace crocco {

namespace {

struct CellRange {
  int i0, i1, j0, j1;  // half-open cell ranges
};

CellRange cells(const GridSpec& g, Domain d) {
  if (d == Domain::full) return {0, g.nx, 0, g.ny};
  const int m = kInteriorMargin;
  return {m, g.nx - m, m, g.ny - m};
}

std::vector<double> trapezoid(int n, double h) {
  std::vector<double> w(n + 1, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

/// Cell-centered derivatives and value from the 8 corners of cell (n, i, j).
struct CellSample {
  double u, ux, uy, ut;
};

CellSample sample_cell(const FieldHistory& h, int n, int i, int j) {
  const auto& g = h.grid;
  const Array2& a = h.at(n);
  const Array2& b = h.at(n + 1);
  const double u = 0.125 * (a(i, j) + a(i + 1, j) + a(i, j + 1) + a(i + 1, j + 1) + b(i, j) +
                            b(i + 1, j) + b(i, j + 1) + b(i + 1, j + 1));
  const double ux = 0.25 *
                    ((a(i + 1, j) - a(i, j)) + (a(i + 1, j + 1) - a(i, j + 1)) +
                     (b(i + 1, j) - b(i, j)) + (b(i + 1, j + 1) - b(i, j + 1))) /
                    g.dx();
  const double uy = 0.25 *
                    ((a(i, j + 1) - a(i, j)) + (a(i + 1, j + 1) - a(i + 1, j)) +
                     (b(i, j + 1) - b(i, j)) + (b(i + 1, j + 1) - b(i + 1, j))) /
                    g.dy();
  const double ut = 0.25 *
                    ((b(i, j) - a(i, j)) + (b(i + 1, j) - a(i + 1, j)) +
                     (b(i, j + 1) - a(i, j + 1)) + (b(i + 1, j + 1) - a(i + 1, j + 1))) /
                    g.dt();
  return {u, ux, uy, ut};
}

}  // namespace

const char* to_string(Domain d) { return d == Domain::full ? "full" : "interior"; }

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void EstimateReport::add(std::string key, double value, const std::string& grid, double eps,
                         Domain domain, std::string source) {
  entries_.push_back({std::move(key), value, {}, grid, eps, domain, std::move(source)});
}

void EstimateReport::add_text(std::string key, std::string text, const std::string& grid, double eps,
                              std::string source) {
  entries_.push_back({std::move(key), 0.0, std::move(text), grid, eps, Domain::full, std::move(source)});
}

void EstimateReport::verdict(std::string name, bool pass, std::string detail) {
  verdicts_.push_back({std::move(name), pass, std::move(detail)});
}

void EstimateReport::merge(const EstimateReport& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
  verdicts_.insert(verdicts_.end(), other.verdicts_.begin(), other.verdicts_.end());
}

const ReportEntry* EstimateReport::find(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.key == key) return &e;
  return nullptr;
}

bool EstimateReport::all_pass() const {
  return std::all_of(verdicts_.begin(), verdicts_.end(), [](const Verdict& v) { return v.pass; });
}

std::string EstimateReport::to_text() const {
  std::ostringstream out;
  for (const auto& e : entries_) {
    out << e.key << " = " << (e.text.empty() ? format_number(e.value) : e.text) << "\n";
  }
  for (const auto& v : verdicts_) {
    out << "verdict." << v.name << " = " << (v.pass ? "pass" : "fail");
    if (!v.detail.empty()) out << "  # " << v.detail;
    out << "\n";
  }
  return out.str();
}

std::string EstimateReport::to_csv() const {
  std::ostringstream out;
  out << "key,value,grid,eps,domain\n";
  for (const auto& e : entries_) {
    out << e.key << "," << (e.text.empty() ? format_number(e.value) : e.text) << "," << e.grid << ","
        << format_number(e.eps) << "," << to_string(e.domain) << "\n";
  }
  return out.str();
}

std::vector<TestFunction> test_function_family(double length, double horizon) {
  std::vector<TestFunction> family;
  const double pi = std::numbers::pi;
  for (int k : {1, 2}) {
    for (int m : {0, 1, 2}) {
      const double kx = pi * k / length;
      auto g = [horizon](double t) { return t * std::exp(-(t / horizon) * (t / horizon)); };
      auto dg = [horizon](double t) {
        const double s = t / horizon;
        return std::exp(-s * s) * (1.0 - 2.0 * s * s);
      };
      auto ym = [m](double y) { return std::pow(1.0 - y, m); };
      auto dym = [m](double y) { return m == 0 ? 0.0 : -m * std::pow(1.0 - y, m - 1); };
      TestFunction f;
      f.name = "k" + std::to_string(k) + "_m" + std::to_string(m);
      f.phi = [=](double x, double y, double t) { return std::sin(kx * x) * ym(y) * g(t); };
      f.phi_x = [=](double x, double y, double t) { return kx * std::cos(kx * x) * ym(y) * g(t); };
      f.phi_y = [=](double x, double y, double t) { return std::sin(kx * x) * dym(y) * g(t); };
      f.phi_t = [=](double x, double y, double t) { return std::sin(kx * x) * ym(y) * dg(t); };
      family.push_back(std::move(f));
    }
  }
  return family;
}

TestFunction combine(const TestFunction& f1, double s1, const TestFunction& f2, double s2) {
  auto mix = [s1, s2](auto p, auto q) {
    return [=](double x, double y, double t) { return s1 * p(x, y, t) + s2 * q(x, y, t); };
  };
  return {f1.name + "+" + f2.name, mix(f1.phi, f2.phi), mix(f1.phi_x, f2.phi_x),
          mix(f1.phi_y, f2.phi_y), mix(f1.phi_t, f2.phi_t)};
}

ComparisonResult comparison_constant(const FieldHistory& history) {
  const auto& g = history.grid;
  ComparisonResult r;
  for (int n = 0; n <= g.nt; ++n) {
    double worst = 1.0;
    for (int i = 0; i <= g.nx; ++i) {
      for (int j = 0; j < g.ny; ++j) {
        const double u = history.at(n)(i, j);
        const double lin = 1.0 - g.y(j);
        if (!(u > 0.0)) {
          if (!r.degenerate) {
            std::ostringstream at;
            at << "t=" << g.t(n) << " x=" << g.x(i) << " y=" << g.y(j) << " u=" << u;
            r.degenerate = true;
            r.degenerate_at = at.str();
          }
          continue;
        }
        worst = std::max({worst, u / lin, lin / u});
      }
    }
    r.per_snapshot.push_back(worst);
    r.c = std::max(r.c, worst);
  }
  if (r.degenerate) r.c = std::numeric_limits<double>::infinity();
  return r;
}

double bv_seminorm(const FieldHistory& history, Domain domain) {
  const auto& g = history.grid;
  const auto cr = cells(g, domain);
  const double vol = g.dx() * g.dy() * g.dt();
  double total = 0.0;
  for (int n = 0; n < g.nt; ++n)
    for (int i = cr.i0; i < cr.i1; ++i)
      for (int j = cr.j0; j < cr.j1; ++j) {
        const auto s = sample_cell(history, n, i, j);
        total += (std::abs(s.ux) + std::abs(s.uy) + std::abs(s.ut)) * vol;
      }
  return total;
}

WeightedNorms weighted_grad_norms(const FieldHistory& history, double alpha, Domain domain) {
  if (!(alpha > -1.0)) throw ParameterError("weighted_grad_norms: alpha must exceed -1");
  const auto& g = history.grid;
  const auto cr = cells(g, domain);
  const double vol = g.dx() * g.dy() * g.dt();
  WeightedNorms r;
  for (int j = cr.j0; j < cr.j1; ++j) {
    const double w = std::pow(1.0 - (j + 0.5) * g.dy(), alpha);
    double n1 = 0.0, n2 = 0.0;
    for (int n = 0; n < g.nt; ++n)
      for (int i = cr.i0; i < cr.i1; ++i) {
        const double uy = sample_cell(history, n, i, j).uy;
        n1 += std::abs(uy);
        n2 += uy * uy;
      }
    r.n1 += w * n1 * vol;
    r.n2 += w * n2 * vol;
  }
  return r;
}

double weighted_dyy_measure(const FieldHistory& history, double alpha, Domain domain) {
  if (!(alpha > 0.0)) throw ParameterError("weighted_dyy_measure: alpha must be positive");
  const auto& g = history.grid;
  const double dy2 = g.dy() * g.dy();
  int i0 = 0, i1 = g.nx, j0 = 0, j1 = g.ny;
  if (domain == Domain::interior) {
    i0 = j0 = kInteriorMargin;
    i1 = g.nx - kInteriorMargin;
    j1 = g.ny - kInteriorMargin;
  }
  const auto wx = trapezoid(i1 - i0, g.dx());
  const auto wy = trapezoid(j1 - j0, g.dy());
  const auto wt = trapezoid(g.nt, g.dt());
  auto second = [&](const Array2& u, int i, int j) {
    if (j == 0) return (2.0 * u(i, 0) - 5.0 * u(i, 1) + 4.0 * u(i, 2) - u(i, 3)) / dy2;
    if (j == g.ny) {
      return (2.0 * u(i, j) - 5.0 * u(i, j - 1) + 4.0 * u(i, j - 2) - u(i, j - 3)) / dy2;
    }
    return (u(i, j + 1) - 2.0 * u(i, j) + u(i, j - 1)) / dy2;
  };
  double total = 0.0;
  for (int n = 0; n <= g.nt; ++n) {
    const Array2& u = history.at(n);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) {
        const double w = std::pow(1.0 - g.y(j), alpha);
        total += wt[n] * wx[i - i0] * wy[j - j0] * w * std::abs(second(u, i, j));
      }
  }
  return total;
}

namespace {

/// Per-cell quantities shared by every test function.
struct WeakCell {
  double x, y, t;
  double inv_u, uy;
  double a, a_x, b, b_y, c;
};

std::vector<WeakCell> weak_cells(const FieldHistory& h, const CroccoProblem& p, const CellRange& cr) {
  const auto& g = h.grid;
  std::vector<WeakCell> out;
  out.reserve(static_cast<std::size_t>(g.nt) * (cr.i1 - cr.i0) * (cr.j1 - cr.j0));
  for (int n = 0; n < g.nt; ++n)
    for (int i = cr.i0; i < cr.i1; ++i)
      for (int j = cr.j0; j < cr.j1; ++j) {
        const auto s = sample_cell(h, n, i, j);
        const double x = (i + 0.5) * g.dx(), y = (j + 0.5) * g.dy(), t = (n + 0.5) * g.dt();
        if (!(s.u > 0.0)) {
          throw NumericalError("weak_residual: cell average of u is not positive at x=" +
                               std::to_string(x) + " y=" + std::to_string(y) + " t=" +
                               std::to_string(t));
        }
        const auto k = coefficients_at(p.flow, x, y, t);
        out.push_back({x, y, t, 1.0 / s.u, s.uy, k.a, k.a_x, k.b, k.b_y, k.c});
      }
  return out;
}

double weak_residual_cells(const FieldHistory& h, const CroccoProblem& p, const TestFunction& f,
                           double alpha, Domain domain, const std::vector<WeakCell>& cells_) {
  const auto& g = h.grid;
  const auto cr = cells(g, domain);
  const double vol = g.dx() * g.dy() * g.dt();
  auto W = [alpha](double y) { return std::pow(1.0 - y, alpha); };
  auto dW = [alpha](double y) { return -alpha * std::pow(1.0 - y, alpha - 1.0); };

  double volume = 0.0;
  for (const auto& c : cells_) {
    const double phi = f.phi(c.x, c.y, c.t);
    const double w = W(c.y), dw = dW(c.y);
    const double py = f.phi_y(c.x, c.y, c.t);
    const double term_t = w * f.phi_t(c.x, c.y, c.t) * c.inv_u;
    const double term_diff = (dw * phi + w * py) * c.uy;
    const double term_a = (c.a_x * phi + c.a * f.phi_x(c.x, c.y, c.t)) * w * c.inv_u;
    const double term_b = (dw * c.b * phi + w * c.b_y * phi + w * c.b * py) * c.inv_u;
    const double term_c = w * phi * c.c * c.inv_u;
    volume += term_t + term_diff + term_a + term_b + term_c;
  }
  volume *= vol;

  const Array2& uT = h.at(g.nt);
  double terminal = 0.0;
  for (int i = cr.i0; i < cr.i1; ++i)
    for (int j = cr.j0; j < cr.j1; ++j) {
      const double u = 0.25 * (uT(i, j) + uT(i + 1, j) + uT(i, j + 1) + uT(i + 1, j + 1));
      const double x = (i + 0.5) * g.dx(), y = (j + 0.5) * g.dy();
      terminal += W(y) * f.phi(x, y, g.horizon) / u;
    }
  terminal *= g.dx() * g.dy();

  double wall = 0.0;
  if (domain == Domain::full) {
    for (int n = 0; n < g.nt; ++n)
      for (int i = 0; i < g.nx; ++i) {
        const double x = (i + 0.5) * g.dx(), t = (n + 0.5) * g.dt();
        wall += p.data.v0(x, t) * f.phi(x, 0.0, t);
      }
    wall *= g.dx() * g.dt();
  }
  return -terminal + volume + wall;
}

}  // namespace

double weak_residual(const FieldHistory& history, const CroccoProblem& problem,
                     const TestFunction& phi, double alpha, Domain domain) {
  const auto cc = weak_cells(history, problem, cells(history.grid, domain));
  return weak_residual_cells(history, problem, phi, alpha, domain, cc);
}

WeakResidualReport weak_residual(const FieldHistory& history, const CroccoProblem& problem,
                                 const std::vector<TestFunction>& tests, double alpha,
                                 Domain domain) {
  const auto cc = weak_cells(history, problem, cells(history.grid, domain));
  WeakResidualReport r;
  for (const auto& f : tests) {
    const double v = weak_residual_cells(history, problem, f, alpha, domain, cc);
    r.signed_residuals.push_back(v);
    r.max_abs = std::max(r.max_abs, std::abs(v));
  }
  return r;
}

TraceReport trace_residual(const FieldHistory& history, const CroccoProblem& problem) {
  const auto& g = history.grid;
  TraceReport r;
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j <= g.ny; ++j)
      r.initial_sup = std::max(r.initial_sup, std::abs(history.at(0)(i, j) - problem.w0(i, j) *
                                                                               (j < g.ny ? 1.0 : 0.0)));
  const auto wx = trapezoid(g.nx, g.dx());
  for (int n = 0; n <= g.nt; ++n) {
    const Array2& u = history.at(n);
    for (int i = 0; i <= g.nx; ++i) r.top_sup = std::max(r.top_sup, std::abs(u(i, g.ny)));
    if (n == 0) continue;
    for (int j = 0; j < g.ny; ++j)
      r.inflow_sup = std::max(r.inflow_sup, std::abs(u(0, j) - problem.w1(n, j)));
    double slab = 0.0;
    for (int i = 0; i <= g.nx; ++i) {
      const double u0 = u(i, 0);
      if (!(u0 > 0.0)) {
        r.degenerate = true;
        continue;
      }
      const double uy = (-3.0 * u0 + 4.0 * u(i, 1) - u(i, 2)) / (2.0 * g.dy());
      const double res = std::abs(uy - problem.v0(n, i) - problem.coeffs.px_over_u(n, i) / u0);
      r.wall_sup = std::max(r.wall_sup, res);
      slab += wx[i] * res;
    }
    r.wall_l1 += (n == g.nt ? 0.5 : 1.0) * g.dt() * slab;
  }
  return r;
}

StabilityReport l1_stability(const FieldHistory& a, const FieldHistory& b, const CroccoProblem& pa,
                             const CroccoProblem& pb) {
  if (!(a.grid == b.grid) || !(pa.grid == a.grid) || !(pb.grid == b.grid)) {
    throw ParameterError("l1_stability: runs must share one grid");
  }
  if (a.eps != b.eps) throw ParameterError("l1_stability: runs must share eps");
  const auto& g = a.grid;
  const auto wx = trapezoid(g.nx, g.dx());
  const auto wy = trapezoid(g.ny, g.dy());
  StabilityReport r;
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j <= g.ny; ++j) r.initial_term += wx[i] * wy[j] * std::abs(pa.w0(i, j) - pb.w0(i, j));

  auto inflow_rate = [&](int n) {
    double s = 0.0;
    for (int j = 0; j <= g.ny; ++j) s += wy[j] * std::abs(pa.w1(n, j) - pb.w1(n, j));
    return s;
  };
  auto suction_rate = [&](int n) {
    double s = 0.0;
    for (int i = 0; i <= g.nx; ++i) s += wx[i] * std::abs(pa.v0(n, i) - pb.v0(n, i));
    return s;
  };

  double inflow = 0.0, suction = 0.0;
  double best = -1.0;
  for (int n = 0; n <= g.nt; ++n) {
    if (n > 0) {
      inflow += 0.5 * g.dt() * (inflow_rate(n - 1) + inflow_rate(n));
      suction += 0.5 * g.dt() * (suction_rate(n - 1) + suction_rate(n));
    }
    double lhs = 0.0;
    for (int i = 0; i <= g.nx; ++i)
      for (int j = 0; j <= g.ny; ++j) lhs += wx[i] * wy[j] * std::abs(a.at(n)(i, j) - b.at(n)(i, j));
    const double rhs = r.initial_term + inflow + suction;
    r.t.push_back(g.t(n));
    r.lhs.push_back(lhs);
    r.rhs.push_back(rhs);
    r.inflow_term.push_back(inflow);
    r.suction_term.push_back(suction);
    r.max_lhs = std::max(r.max_lhs, lhs);
    if (rhs > 0.0) {
      best = std::max(best, lhs / rhs);
    } else if (lhs > 0.0) {
      r.hard_violation = true;
    }
  }
  if (best >= 0.0) r.c6 = best;
  r.exact_match = !r.c6 && !r.hard_violation;
  return r;
}

PhysicalStabilityReport physical_stability(const FieldHistory& a, const FieldHistory& b,
                                           const CroccoProblem& pa, const CroccoProblem& pb) {
  const auto base = l1_stability(a, b, pa, pb);
  const auto& g = a.grid;
  const auto wx = trapezoid(g.nx, g.dx());
  const int m = g.ny;  // nodes j = 0..ny-1 carry w > 0
  PhysicalStabilityReport r;
  r.initial_term = base.initial_term;
  r.inflow_term = base.inflow_term;
  r.suction_term = base.suction_term;
  std::vector<double> wa(m), wb(m);
  for (int n = 0; n <= g.nt; ++n) {
    double phys = 0.0, croc = 0.0;
    for (int i = 0; i <= g.nx; ++i) {
      for (int j = 0; j < m; ++j) {
        wa[j] = a.at(n)(i, j);
        wb[j] = b.at(n)(i, j);
      }
      const double U = pa.flow.U(g.x(i), g.t(n));
      const auto prof = from_crocco(wa, g.dy(), U);
      double col_phys = 0.0, col_croc = 0.0;
      for (int j = 0; j + 1 < m; ++j) {
        // |u1_y(y) - u2_y(y~)| u1_y / U^2 on the physical y of run a.
        const double g0 = std::abs(U * wa[j] - U * wb[j]) * U * wa[j] / (U * U);
        const double g1 = std::abs(U * wa[j + 1] - U * wb[j + 1]) * U * wa[j + 1] / (U * U);
        col_phys += 0.5 * (g0 + g1) * (prof.y[j + 1] - prof.y[j]);
        col_croc += 0.5 * (std::abs(wa[j] - wb[j]) + std::abs(wa[j + 1] - wb[j + 1])) * g.dy();
      }
      phys += wx[i] * col_phys;
      croc += wx[i] * col_croc;
    }
    r.t.push_back(g.t(n));
    r.physical.push_back(phys);
    r.crocco.push_back(croc);
    const double scale = std::max(croc, 1e-300);
    if (croc > 0.0 || phys > 0.0) r.max_route_gap = std::max(r.max_route_gap, std::abs(phys - croc) / scale);
  }
  return r;
}

}  // namespace crocco
