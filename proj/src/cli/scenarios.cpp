#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "crocco/cli.hpp"
#include "crocco/errors.hpp"
#include "crocco/flow.hpp"
#include "crocco/mms.hpp"
#include "crocco/solver.hpp"
#include "crocco/tolerances.hpp"

namespace crocco {

namespace {

namespace fs = std::filesystem;

bool solver_scenario(const std::string& s) {
  return s == "exact_profile" || s == "favorable_accel" || s == "viscosity_sweep" || s == "stability_perturb";
}

std::string default_flow(const std::string& scenario) {
  return scenario == "exact_profile" || scenario == "manufactured" ? "uniform" : "accelerating";
}

ExternalFlow make_flow(const RunConfig& c) {
  const std::string name = c.flow.empty() ? default_flow(c.scenario) : c.flow;
  if (name == "table") {
    if (c.flow_table.empty()) throw ConfigError("flow = table needs flow_table");
    return flow_from_table(c.flow_table, c.grid.length, c.grid.horizon);
  }
  return builtin_flow(name, c.grid.length, c.grid.horizon);
}

ProblemData make_data(const RunConfig& c) {
  const std::string name = !c.data.empty() ? c.data : (c.scenario == "exact_profile" ? "linear" : "favorable");
  const double v0 = c.v0.value_or(c.scenario == "exact_profile" ? -1.0 : -0.5);
  ProblemData d;
  if (name == "linear") {
    d.w0 = [](double, double y) { return 1.0 - y; };
    d.w1 = [](double y, double) { return 1.0 - y; };
  } else if (name == "favorable") {
    d.w0 = [](double, double y) { return (1.0 - y) * (1.0 - 0.5 * y); };
    d.w1 = [](double y, double) { return (1.0 - y) * (1.0 - 0.5 * y); };
  } else {
    throw ConfigError("unknown data '" + name + "' (expected linear or favorable)");
  }
  d.v0 = [v0](double, double) { return v0; };
  return d;
}

GridSpec doubled(const GridSpec& g) { return {2 * g.nx, 2 * g.ny, 2 * g.nt, g.length, g.horizon}; }

std::string eps_tag(const std::vector<double>& eps) {
  std::string s;
  for (std::size_t k = 0; k < eps.size(); ++k) s += (k ? ";" : "") + format_number(eps[k]);
  return s;
}

std::string model_tag(int n) { return std::to_string(n) + "x" + std::to_string(n) + "x" + std::to_string(2 * n); }

double spread(const std::vector<double>& v) {
  double lo = v.front(), hi = v.front();
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return hi > 0.0 ? (hi - lo) / hi : 0.0;
}

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string fields_csv(const FieldHistory& h, int stride) {
  std::ostringstream out;
  out << "t,x,y,u\n";
  const auto& g = h.grid;
  for (int n = 0; n <= g.nt; n += stride)
    for (int i = 0; i <= g.nx; i += stride)
      for (int j = 0; j <= g.ny; j += stride) {
        out << format_number(g.t(n)) << "," << format_number(g.x(i)) << "," << format_number(g.y(j)) << ","
            << format_number(h.at(n)(i, j)) << "\n";
      }
  return out.str();
}

// Coarse-node restriction of a history on the doubled grid.
FieldHistory restrict_to(const FieldHistory& fine, const GridSpec& coarse) {
  FieldHistory h{coarse, fine.eps, {}, {}};
  for (int n = 0; n <= coarse.nt; ++n) {
    FieldSnapshot s{coarse.t(n), fine.eps, Array2(coarse.nx + 1, coarse.ny + 1)};
    for (int i = 0; i <= coarse.nx; ++i)
      for (int j = 0; j <= coarse.ny; ++j) s.u(i, j) = fine.at(2 * n)(2 * i, 2 * j);
    h.snapshots.push_back(std::move(s));
  }
  return h;
}

ReportEntry entry(std::string key, double value, const std::string& grid, double eps = 0.0,
                  Domain domain = Domain::full) {
  return {std::move(key), value, "", grid, eps, domain, ""};
}

// ---------------------------------------------------------------- solver scenarios

void exact_profile(const RunConfig& c, ScenarioOutput& out) {
  auto& rep = out.report;
  const auto flow = make_flow(c);
  const auto data = make_data(c);
  const auto p = assemble(flow, data, c.grid);
  const auto tests = test_function_family(c.grid.length, c.grid.horizon);
  const std::string gid = c.grid.id();

  double worst_dev = 0.0, worst_c = 0.0, worst_weak = 0.0, worst_wall = 0.0;
  double solve_seconds = 0.0;
  for (double eps : c.eps_list) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto h = solve(p, eps);
    solve_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double dev = 0.0;
    for (int n = 0; n <= c.grid.nt; ++n)
      for (int i = 0; i <= c.grid.nx; ++i)
        for (int j = 0; j <= c.grid.ny; ++j) dev = std::max(dev, std::abs(h.at(n)(i, j) - p.w0(i, j)));
    const auto cmp = comparison_constant(h);
    const auto weak = weak_residual(h, p, tests, c.weak_alpha);
    const auto tr = trace_residual(h, p);
    rep.add(entry("max_deviation", dev, gid, eps));
    rep.add(entry("comparison_constant", cmp.c, gid, eps));
    rep.add(entry("weak_residual_max", weak.max_abs, gid, eps));
    rep.add(entry("trace.wall_sup", tr.wall_sup, gid, eps));
    rep.add(entry("trace.inflow_sup", tr.inflow_sup, gid, eps));
    worst_dev = std::max(worst_dev, dev);
    worst_c = std::max(worst_c, std::abs(cmp.c - 1.0));
    worst_weak = std::max(worst_weak, weak.max_abs);
    worst_wall = std::max(worst_wall, tr.wall_sup);
    if (eps == c.eps_list.back()) out.tables["fields.csv"] = fields_csv(h, c.fields_stride);
  }
  out.seconds = solve_seconds;
  rep.verdict("exact_reproduction", worst_dev <= tol::kExactProfile, "max |u - w0| <= 1e-8 for every eps");
  rep.verdict("runtime", solve_seconds < tol::kExactRuntimeSeconds, "all solves finish within 10 s");
  rep.verdict("comparison_constant", worst_c <= tol::kComparisonExact, "|C - 1| <= 1e-6");
  rep.verdict("weak_residual", worst_weak <= tol::kWeakResidual, "max over the test family <= 1e-2");
  rep.verdict("trace_wall", worst_wall <= tol::kTraceWall, "wall condition residual <= 1e-6");
  rep.add(entry("summary.max_deviation", worst_dev, gid));
  rep.add(entry("summary.weak_residual_max", worst_weak, gid));
  rep.add(entry("summary.trace_wall_sup", worst_wall, gid));

  if (c.refine_check) {
    const GridSpec g2 = doubled(c.grid);
    const double eps = c.eps_list.back();
    const auto p2 = assemble(flow, data, g2);
    const auto h2 = solve(p2, eps);
    const double w2 = weak_residual(h2, p2, tests, c.weak_alpha).max_abs;
    double base = 0.0;
    for (const auto& e : rep.entries())
      if (e.key == "weak_residual_max" && e.eps == eps) base = e.value;
    rep.add(entry("weak_residual_max", w2, g2.id(), eps));
    const double factor = w2 > 0.0 ? base / w2 : std::numeric_limits<double>::infinity();
    rep.add(entry("weak_residual_refinement_factor", factor, g2.id(), eps));
    rep.verdict("weak_residual_refinement", factor >= tol::kWeakRefinementFactor,
                "residual drops by >= 1.8 on the doubled grid");
  }
}

void manufactured(const RunConfig& c, ScenarioOutput& out) {
  auto& rep = out.report;
  const auto flow = make_flow(c);
  const auto field = default_manufactured_field(c.grid.length);
  const double eps = c.eps_list.back();
  std::ostringstream table;
  table << "axis,level,error,diff\n";
  for (auto axis : {RefineAxis::x, RefineAxis::y, RefineAxis::t}) {
    const auto r = refinement_order(field, flow, c.grid, eps, axis);
    const std::string a = to_string(axis);
    rep.add(entry("order_" + a, r.order, c.grid.id(), eps));
    rep.add(entry("diff_coarse_" + a, r.diff_coarse, c.grid.id(), eps));
    rep.add(entry("diff_fine_" + a, r.diff_fine, c.grid.id(), eps));
    for (int k = 0; k < 3; ++k) {
      table << a << "," << k << "," << format_number(r.error[k]) << ","
            << (k == 0 ? format_number(r.diff_coarse) : k == 1 ? format_number(r.diff_fine) : std::string("")) << "\n";
    }
    const double need = axis == RefineAxis::y ? tol::kOrderY : tol::kOrderXT;
    rep.verdict("order_" + a, r.order >= need, axis == RefineAxis::y ? "order >= 1.9" : "order >= 0.9");
  }
  out.tables["orders.csv"] = table.str();
}

void favorable_accel(const RunConfig& c, ScenarioOutput& out) {
  auto& rep = out.report;
  const auto p = assemble(make_flow(c), make_data(c), c.grid);
  const std::string gid = c.grid.id();
  std::map<std::string, std::vector<double>> series;
  std::vector<std::string> order;
  auto put = [&](const std::string& key, double v, double eps) {
    if (!series.count(key)) order.push_back(key);
    series[key].push_back(v);
    rep.add(entry(key, v, gid, eps));
  };
  for (double eps : c.eps_list) {
    const auto h = solve(p, eps);
    const auto cmp = comparison_constant(h);
    if (cmp.degenerate) throw NumericalError("comparison constant degenerate at " + cmp.degenerate_at);
    put("comparison_constant", cmp.c, eps);
    put("bv_seminorm", bv_seminorm(h), eps);
    for (double a : c.alpha_list) {
      const auto wn = weighted_grad_norms(h, a);
      put("N1_alpha" + format_number(a), wn.n1, eps);
      put("N2_alpha" + format_number(a), wn.n2, eps);
    }
    put("dyy_alpha" + format_number(c.alpha_dyy), weighted_dyy_measure(h, c.alpha_dyy), eps);
    put("dyy_alpha" + format_number(c.alpha_dyy) + "_interior", weighted_dyy_measure(h, c.alpha_dyy, Domain::interior),
        eps);
    if (eps == c.eps_list.back()) out.tables["fields.csv"] = fields_csv(h, c.fields_stride);
  }
  for (const auto& key : order) {
    const double s = spread(series[key]);
    rep.add(entry("spread." + key, s, gid));
    if (key.ends_with("_interior")) continue;  // diagnostic only
    rep.verdict("uniform." + key, s < tol::kUniformSpread, "(max - min) / max over eps < 0.1");
  }
}

void sweep(const RunConfig& c, ScenarioOutput& out) {
  auto& rep = out.report;
  const auto flow = make_flow(c);
  const auto data = make_data(c);
  const auto p = assemble(flow, data, c.grid);
  const auto table = viscosity_sweep(p, c.eps_list, true);
  std::ostringstream csv;
  csv << "eps_hi,eps_lo,l1_diff\n";
  bool ok = true, decreasing = true;
  std::string failure;
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& r = table.rows[k];
    csv << format_number(r.eps_hi) << "," << format_number(r.eps_lo) << "," << (r.ok ? format_number(r.l1_diff) : "failed")
        << "\n";
    if (!r.ok) {
      ok = false;
      if (failure.empty()) failure = r.error;
      continue;
    }
    rep.add(entry("l1_diff", r.l1_diff, c.grid.id(), r.eps_lo));
    if (k > 0 && table.rows[k - 1].ok && !(r.l1_diff < table.rows[k - 1].l1_diff)) decreasing = false;
  }
  out.tables["sweep.csv"] = csv.str();
  if (!ok) throw NumericalError("viscosity sweep: " + failure);
  const auto& finest = *table.runs.back();
  out.tables["fields.csv"] = fields_csv(finest, c.fields_stride);

  const GridSpec g2 = doubled(c.grid);
  const auto fine = solve(assemble(flow, data, g2), c.eps_list.back());
  const double proxy = spacetime_l1(finest, restrict_to(fine, c.grid));
  const double last = table.rows.back().l1_diff;
  rep.add(entry("grid_proxy", proxy, g2.id(), c.eps_list.back()));
  rep.add(entry("final_over_proxy", last / proxy, c.grid.id(), c.eps_list.back()));
  rep.verdict("cauchy_decreasing", decreasing, "successive L1 differences strictly decrease");
  rep.verdict("cauchy_final", last < tol::kSweepProxyFactor * proxy, "final difference < 10 x grid proxy");
}

ProblemData perturbed(const ProblemData& d, const std::string& family, double delta) {
  ProblemData p = d;
  const double k = 1.0 + delta;
  if (family == "initial") {
    p.w0 = [w = d.w0, k](double x, double y) { return k * w(x, y); };
  } else if (family == "inflow") {
    p.w1 = [w = d.w1, k](double y, double t) { return k * w(y, t); };
  } else if (family == "suction") {
    p.v0 = [v = d.v0, k](double x, double t) { return k * v(x, t); };
  } else {
    throw ConfigError("unknown perturbation family '" + family + "'");
  }
  return p;
}

void stability(const RunConfig& c, ScenarioOutput& out) {
  auto& rep = out.report;
  const auto flow = make_flow(c);
  const auto data = make_data(c);
  std::vector<GridSpec> grids{c.grid};
  if (c.refine_check) grids.push_back(doubled(c.grid));

  std::ostringstream csv;
  csv << "family,grid,eps,t,lhs,rhs\n";
  std::map<std::string, std::vector<double>> c6;
  std::map<std::string, bool> bounded;
  double uniqueness = 0.0;
  for (const auto& f : c.families) bounded[f] = true;
  for (const auto& g : grids) {
    const auto pa = assemble(flow, data, g);
    for (double eps : c.eps_list) {
      auto base = std::async(std::launch::async, [&] { return solve(pa, eps); });
      auto again = std::async(std::launch::async, [&] { return solve(pa, eps); });
      std::vector<CroccoProblem> pbs;
      for (const auto& f : c.families) pbs.push_back(assemble(flow, perturbed(data, f, c.perturbation), g));
      std::vector<std::future<FieldHistory>> runs;
      for (const auto& pb : pbs) runs.push_back(std::async(std::launch::async, [&pb, eps] { return solve(pb, eps); }));
      const auto ha = base.get();
      const auto same = l1_stability(ha, again.get(), pa, pa);
      uniqueness = std::max(uniqueness, same.max_lhs);
      rep.add(entry("identical_max_lhs", same.max_lhs, g.id(), eps));
      for (std::size_t k = 0; k < c.families.size(); ++k) {
        const auto& fam = c.families[k];
        const auto hb = runs[k].get();
        const auto r = l1_stability(ha, hb, pa, pbs[k]);
        for (std::size_t n = 0; n < r.t.size(); ++n) {
          csv << fam << "," << g.id() << "," << format_number(eps) << "," << format_number(r.t[n]) << ","
              << format_number(r.lhs[n]) << "," << format_number(r.rhs[n]) << "\n";
        }
        if (r.exact_match) {
          rep.add_text("l1_stability." + fam, "exact-match", g.id(), eps);
          continue;
        }
        if (r.hard_violation || !r.c6) {
          bounded[fam] = false;
          rep.add_text("l1_stability." + fam, "hard-violation", g.id(), eps);
          continue;
        }
        rep.add(entry("c6." + fam, *r.c6, g.id(), eps));
        rep.add(entry("max_lhs." + fam, r.max_lhs, g.id(), eps));
        c6[fam].push_back(*r.c6);
        if (&g == &grids.front() && eps == c.eps_list.front()) {
          const auto ps = physical_stability(ha, hb, pa, pbs[k]);
          rep.add(entry("physical_route_gap." + fam, ps.max_route_gap, g.id(), eps));
          double worst = 0.0;
          for (std::size_t n = 1; n < ps.t.size(); ++n) {
            const double rhs = ps.initial_term + ps.inflow_term[n] + ps.suction_term[n];
            if (rhs > 0.0) worst = std::max(worst, ps.physical[n] / rhs);
          }
          rep.add(entry("physical_c6." + fam, worst, g.id(), eps));
        }
      }
    }
  }
  bool all_exact = true;
  for (const auto& f : c.families) all_exact = all_exact && c6[f].empty() && bounded[f];
  if (all_exact) rep.add_text("l1_stability", "exact-match", c.grid.id(), c.eps_list.front());
  out.tables["stability.csv"] = csv.str();
  for (const auto& f : c.families) {
    rep.verdict("stability." + f + ".bounded", bounded[f], "lhs <= c6 rhs with a finite c6; no lhs > 0 at rhs = 0");
    if (c6[f].size() > 1) {
      const double v = spread(c6[f]);
      rep.add(entry("c6_variation." + f, v, c.grid.id()));
      rep.verdict("stability." + f + ".c6_variation", v < tol::kC6Variation, "c6 varies < 20% over grids and eps");
    }
  }
  rep.verdict("uniqueness", uniqueness <= tol::kUniqueness, "identical data give lhs <= 1e-12");
}

// ---------------------------------------------------------------- kolmogorov lab

void kolmogorov_checks(const RunConfig& c, ScenarioOutput& out) {
  auto& rep = out.report;
  const std::string tag = "kernel";
  double worst_mass = 0.0;
  for (double s : {0.1, 1.0}) {
    const KernelPoint fixed{0.2, -0.4, 0.0};
    const double m1 = gamma0_mass(s, fixed), m2 = gamma0_mass(s, fixed, true);
    rep.add(entry("gamma0.mass_zeta.s" + format_number(s), m1, tag));
    rep.add(entry("gamma0.mass_z.s" + format_number(s), m2, tag));
    worst_mass = std::max({worst_mass, std::abs(m1 - 1.0), std::abs(m2 - 1.0)});
  }
  rep.add(entry("gamma0.normalization", 1.0 + worst_mass, tag));
  rep.verdict("gamma0.mass", worst_mass <= tol::kKernelMass, "|mass - 1| <= 1e-8 at t - tau in {0.1, 1}");

  std::mt19937_64 rng(c.seed);
  double worst_dil = 0.0;
  for (int k = 0; k < 100; ++k) {
    const KernelPoint z{2.0 * unit_draw(rng) - 1.0, 2.0 * unit_draw(rng) - 1.0, 0.05 + 0.95 * unit_draw(rng)};
    const double mu = 0.5 + 1.5 * unit_draw(rng);
    worst_dil = std::max(worst_dil, dilation_defect(z, mu));
  }
  rep.add(entry("gamma0.dilation_defect", worst_dil, tag));
  rep.verdict("gamma0.dilation", worst_dil <= tol::kDilation, "defect <= 1e-12 on 100 seeded pairs");

  const KernelPoint z{0.1, 0.2, 1.0};
  const double r1 = std::abs(l0_residual(z, {}, 0.01)), r2 = std::abs(l0_residual(z, {}, 0.005));
  const double order = std::log2(r1 / r2);
  rep.add(entry("gamma0.residual_h0.01", r1, tag));
  rep.add(entry("gamma0.residual_h0.005", r2, tag));
  rep.add(entry("gamma0.residual_order", order, tag));
  rep.verdict("gamma0.residual_order", order >= tol::kKernelOrder, "finite-difference residual order >= 1.9");

  const Cutoff cut(c.cutoff);
  for (const auto& chk : certify_cutoff(cut, 33)) {
    rep.add(entry("cutoff." + chk.item, chk.worst, "33^3"));
    rep.verdict("cutoff." + chk.item, chk.pass, chk.detail);
  }

  for (auto kind : {BoxKind::full, BoxKind::past, BoxKind::slab}) {
    const Box b{0.5, kind};
    const double rel = std::abs(counted_volume(b, 120) - b.volume()) / b.volume();
    const char* name = kind == BoxKind::full ? "full" : kind == BoxKind::past ? "past" : "slab";
    rep.add(entry(std::string("box_volume_error.") + name, rel, "120"));
  }

  BoxField unit(16, 16, 16);
  for (int n = 0; n <= 16; ++n)
    for (int i = 0; i <= 16; ++i)
      for (int j = 0; j <= 16; ++j) unit(n, i, j) = 2.5;
  const double i1 = mean_value_i1(unit, cut, {0, 0, 0});
  rep.add(entry("mean_value.constant_2.5", i1, model_tag(16)));
  rep.verdict("mean_value.constant", std::abs(i1 - 2.5) <= tol::kMeanValueConstant * 2.5,
              "I1 of a constant field returns it to 1e-6");

  const KernelPoint src{0.0, 0.0, -1.5};
  const ModelProblem mp{model_scenarios("constant", 1.0), [src](double x, double y, double t) { return gamma0({x, y, t}, src); },
                        XBoundary::dirichlet};
  std::vector<double> errs;
  for (int n : {16, 32}) {
    const auto u = solve_model(mp, n, n, 2 * n);
    double m = 0.0;
    for (int i = n / 4; i <= 3 * n / 4; ++i)
      for (int j = n / 4; j <= 3 * n / 4; ++j) m = std::max(m, std::abs(u(2 * n, i, j) - gamma0({u.x(i), u.y(j), 0.0}, src)));
    errs.push_back(m);
    rep.add(entry("model.gamma0_error", m, model_tag(n)));
  }
  rep.verdict("model.gamma0_consistency", errs[1] < errs[0], "kernel reproduction error decreases under refinement");

  const ModelProblem lp{model_scenarios(c.rough_runs.front().kind, c.rough_runs.front().lambda, c.seed),
                        model_data(c.model_data), XBoundary::periodic};
  const auto u = solve_model(lp, 16, 16, 32);
  bool in_range = true;
  for (auto variant : {LogVariant::poincare, LogVariant::density}) {
    const auto w = log_subsolution(u, c.h1, variant);
    const double bound = log_bound(c.h1, variant);
    for (double v : w.values().data()) in_range = in_range && v >= 0.0 && v <= bound * (1.0 + 1e-15);
  }
  rep.verdict("log_transform.range", in_range, "0 <= w <= log bound at every node");
}

BoxField model_run(const RunConfig& c, const RoughRun& run, int n) {
  const ModelProblem p{model_scenarios(run.kind, run.lambda, c.seed), model_data(c.model_data), XBoundary::periodic};
  return solve_model(p, n, n, 2 * n);
}

void oscillation_lab(const RunConfig& c, ScenarioOutput& out) {
  auto& rep = out.report;
  const Cutoff cut(c.cutoff);
  const int n0 = c.model_n, n1 = 2 * c.model_n;
  std::vector<double> hs;
  for (double h : c.h_list)
    if (h <= c.h1) hs.push_back(h);
  if (hs.empty()) throw ConfigError("h_list has no level <= h1");

  std::vector<std::future<BoxField>> coarse, fine;
  for (const auto& run : c.rough_runs) {
    coarse.push_back(std::async(std::launch::async, [&c, run, n0] { return model_run(c, run, n0); }));
    fine.push_back(std::async(std::launch::async, [&c, run, n1] { return model_run(c, run, n1); }));
  }

  // density
  BoxField unit(n0, n0, 2 * n0);
  for (int n = 0; n <= 2 * n0; ++n)
    for (int i = 0; i <= n0; ++i)
      for (int j = 0; j <= n0; ++j) unit(n, i, j) = 1.0;
  const auto du = density_ratio(unit, c.r_density, hs, c.box_alpha, c.cutoff.beta);
  rep.add(entry("density.unit_ratio", du.min_ratio, model_tag(n0)));
  rep.verdict("density.unit", du.hypothesis_met && du.min_ratio == 1.0, "u = 1 gives ratio 1");

  std::ostringstream dcsv, ocsv;
  dcsv << "t,h,ratio,verdict\n";
  ocsv << "r,osc_small,osc_big,ratio\n";
  std::vector<BoxField> us;
  for (auto& f : coarse) us.push_back(f.get());
  double beta_bar = 0.0;
  bool holder_ok = true;
  std::vector<double> c_coarse, c_fine;
  bool hard = false;
  double lambda_max = 0.0;
  for (std::size_t k = 0; k < c.rough_runs.size(); ++k) {
    const auto& run = c.rough_runs[k];
    const std::string label = run.label();
    const auto& u = us[k];

    const double scale = normalize_for_density(u, c.r_density);
    const auto un = u.map([scale](double v) { return v * scale; });
    const auto d = density_ratio(un, c.r_density, hs, c.box_alpha, c.cutoff.beta);
    rep.add(entry("density.hypothesis_fraction." + label, d.hypothesis_fraction, model_tag(n0)));
    rep.add(entry("density.min_ratio." + label, d.min_ratio, model_tag(n0)));
    dcsv << "# run " << label << "\n";
    for (const auto& row : d.rows) {
      dcsv << format_number(row.t) << "," << format_number(row.h) << "," << format_number(row.ratio) << ","
           << (row.pass ? "pass" : "fail") << "\n";
    }
    rep.verdict("density." + label, d.hypothesis_met && d.pass(),
                d.hypothesis_met ? "ratio >= 1/11 for h <= h1" : "hypothesis not met");

    const auto tab = oscillation_table(u, c.theta_bar, c.r_list);
    ocsv << "# run " << label << "\n";
    for (const auto& row : tab.rows) {
      ocsv << format_number(row.r) << "," << format_number(row.osc_small) << "," << format_number(row.osc_big) << ","
           << format_number(row.ratio) << "\n";
    }
    rep.add(entry("oscillation.beta_bar." + label, tab.beta_bar, model_tag(n0)));
    rep.add(entry("oscillation.holder_exponent." + label, tab.holder_exponent, model_tag(n0)));
    beta_bar = std::max(beta_bar, tab.beta_bar);
    holder_ok = holder_ok && tab.holder_exponent > 0.0;

    // weak Poincare on the field scaled to a sub-level value at the origin
    auto poincare = [&](const BoxField& field, int n, std::vector<double>& sink, bool both) {
      const double origin = field.sample(0.0, 0.0, 0.0);
      if (!(origin > 0.0)) throw NumericalError("weak Poincare: model field vanishes at the origin");
      const double s = c.poincare_level * c.h1 / origin;
      const auto scaled = field.map([s](double v) { return v * s; });
      const auto w = log_subsolution(scaled, c.h1, LogVariant::poincare);
      const auto pr = weak_poincare_ratio(w, cut);
      rep.add(entry("poincare.lhs." + label, pr.lhs, model_tag(n)));
      rep.add(entry("poincare.rhs." + label, pr.rhs, model_tag(n)));
      rep.add(entry("poincare.ratio." + label, pr.ratio, model_tag(n)));
      const double lambda0 = pr.i0 / log_bound(c.h1, LogVariant::poincare);
      rep.add(entry("poincare.i0_over_bound." + label, lambda0, model_tag(n)));
      if (both) {
        const auto wd = log_subsolution(scaled, c.h1, LogVariant::density);
        const double lambda0d = mean_value(wd, cut).i0 / log_bound(c.h1, LogVariant::density);
        rep.add(entry("poincare.i0_over_bound_density_variant." + label, lambda0d, model_tag(n)));
        lambda_max = std::max({lambda_max, lambda0, lambda0d});
      }
      hard = hard || pr.hard_violation || !std::isfinite(pr.ratio);
      sink.push_back(pr.vacuous ? 0.0 : pr.ratio);
    };
    poincare(u, n0, c_coarse, true);
    poincare(fine[k].get(), n1, c_fine, false);
  }
  out.tables["density.csv"] = dcsv.str();

  const double C0 = *std::max_element(c_coarse.begin(), c_coarse.end());
  const double C1 = *std::max_element(c_fine.begin(), c_fine.end());
  const double change = std::max(C0, C1) > 0.0 ? std::abs(C1 - C0) / std::max(C0, C1) : 0.0;
  rep.add(entry("poincare.C", C0, model_tag(n0)));
  rep.add(entry("poincare.C", C1, model_tag(n1)));
  rep.add(entry("poincare.C_change", change, model_tag(n1)));
  rep.verdict("poincare.no_hard_violation", !hard, "no lhs > 0 with rhs = 0");
  rep.verdict("poincare.refinement_stability", change <= tol::kPoincareStability,
              "family constant C changes <= 25% on the doubled grid");

  rep.add(entry("mean_value.lambda0", lambda_max, model_tag(n0)));
  rep.verdict("mean_value.lambda0", lambda_max < 1.0, "I0 / log bound < 1 for both log variants");
  rep.add(entry("oscillation.beta_bar", beta_bar, model_tag(n0)));
  rep.verdict("oscillation.decay", beta_bar < 1.0 && holder_ok, "every ratio <= beta_bar < 1 and alpha_H > 0");

  const ModelProblem lin{model_scenarios("constant", 1.0), model_data("linear"), XBoundary::periodic};
  const auto ul = solve_model(lin, n0, n0, 2 * n0);
  const auto lt = oscillation_table(ul, c.theta_bar, c.r_list);
  double dev = 0.0;
  ocsv << "# run linear-control\n";
  for (const auto& row : lt.rows) {
    dev = std::max(dev, std::abs(row.ratio - c.theta_bar));
    ocsv << format_number(row.r) << "," << format_number(row.osc_small) << "," << format_number(row.osc_big) << ","
         << format_number(row.ratio) << "\n";
  }
  out.tables["oscillation.csv"] = ocsv.str();
  rep.add(entry("oscillation.linear_control_deviation", dev, model_tag(n0)));
  rep.verdict("oscillation.linear_control", dev <= tol::kLinearControl, "ratio equals theta_bar for u = 1 - y");
}

}  // namespace

const char* version() { return CROCCO_VERSION; }

const std::vector<std::string>& scenario_catalog() {
  static const std::vector<std::string> names{"exact_profile",     "favorable_accel",   "viscosity_sweep",
                                              "stability_perturb", "kolmogorov_checks", "oscillation_lab",
                                              "manufactured"};
  return names;
}

void check_config(const RunConfig& c) {
  const auto& cat = scenario_catalog();
  if (std::find(cat.begin(), cat.end(), c.scenario) == cat.end()) {
    throw ConfigError("unknown scenario '" + c.scenario + "'");
  }
  c.grid.check();
  if (c.fields_stride < 1) throw ConfigError("fields_stride must be >= 1");
  for (double e : c.eps_list)
    if (!(e > 0.0)) throw ConfigError("eps values must be positive");
  if (c.scenario == "viscosity_sweep" || c.scenario == "favorable_accel") {
    for (std::size_t k = 1; k < c.eps_list.size(); ++k)
      if (!(c.eps_list[k] < c.eps_list[k - 1])) throw ConfigError("eps_list must be strictly decreasing");
  }
  if (c.scenario == "viscosity_sweep" && c.eps_list.size() < 2) throw ConfigError("viscosity_sweep needs two eps values");
  if (!c.flow_table.empty() && !fs::exists(c.flow_table)) {
    throw ConfigError("flow_table '" + c.flow_table + "' does not exist");
  }

  if (solver_scenario(c.scenario)) {
    const auto flow = make_flow(c);
    const auto data = make_data(c);
    const auto report = validate(data, flow, c.grid);
    if (!report.ok()) {
      const auto& i = report.issues.front();
      throw ValidationError("data fails '" + i.condition + "' at " + i.location + ": " + i.message);
    }
    for (const auto& f : c.families) (void)perturbed(data, f, c.perturbation);
    std::vector<GridSpec> grids{c.grid};
    if (c.refine_check || c.scenario == "viscosity_sweep") grids.push_back(doubled(c.grid));
    for (const auto& g : grids) {
      const auto p = assemble(flow, data, g);
      for (double e : c.eps_list) check_cfl(p, e);
    }
  } else if (c.scenario == "manufactured") {
    const auto flow = make_flow(c);
    const double eps = c.eps_list.back();
    const auto mp = manufacture(default_manufactured_field(c.grid.length), flow, eps);
    for (auto g : {GridSpec{4 * c.grid.nx, c.grid.ny, c.grid.nt, c.grid.length, c.grid.horizon},
                   GridSpec{c.grid.nx, 4 * c.grid.ny, c.grid.nt, c.grid.length, c.grid.horizon}}) {
      check_cfl(assemble(flow, mp.data, g), eps);
    }
  } else {
    (void)make_cutoff(c.cutoff);
    for (const auto& run : c.rough_runs) (void)model_scenarios(run.kind, run.lambda, c.seed);
    (void)model_data(c.model_data);
    if (c.model_n < 8) throw ConfigError("model_n must be >= 8");
    if (!(c.h1 > 0.0 && c.h1 < 0.5)) throw ParameterError("h1 must lie in (0, 1/2)");
    if (c.rough_runs.empty()) throw ConfigError("rough_runs is empty");
  }
}

ScenarioOutput run_scenario(const RunConfig& config) {
  check_config(config);
  ScenarioOutput out;
  out.scenario = config.scenario;
  const bool lab = config.scenario == "kolmogorov_checks" || config.scenario == "oscillation_lab";
  const std::string grid = lab ? model_tag(config.model_n) : config.grid.id();
  const std::string eps = lab ? "none" : eps_tag(config.eps_list);
  out.header = "# crocco-prandtl " + std::string(version()) + " " + config.scenario + " " + grid + " " + eps;

  const auto t0 = std::chrono::steady_clock::now();
  if (config.scenario == "exact_profile") {
    exact_profile(config, out);
  } else if (config.scenario == "manufactured") {
    manufactured(config, out);
  } else if (config.scenario == "favorable_accel") {
    favorable_accel(config, out);
  } else if (config.scenario == "viscosity_sweep") {
    sweep(config, out);
  } else if (config.scenario == "stability_perturb") {
    stability(config, out);
  } else if (config.scenario == "kolmogorov_checks") {
    kolmogorov_checks(config, out);
  } else {
    oscillation_lab(config, out);
  }
  if (out.seconds == 0.0) out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

void write_artifacts(const ScenarioOutput& output, const std::string& dir) {
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + (fs::path(dir) / name).string() + "'");
    f << output.header << "\n" << body;
  };
  write("report.txt", output.report.to_text());
  write("report.csv", output.report.to_csv());
  for (const auto& [name, body] : output.tables) write(name, body);
}

}  // namespace crocco
