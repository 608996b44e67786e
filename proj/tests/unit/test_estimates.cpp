#include <cmath>

#include "doctest.h"

#include "crocco/errors.hpp"
#include "crocco/estimates.hpp"
#include "crocco/mms.hpp"

using namespace crocco;

namespace {

FieldHistory history_of(const GridSpec& g, const std::function<double(double, double, double)>& u) {
  FieldHistory h{g, 1e-3, {}, {}};
  for (int n = 0; n <= g.nt; ++n) {
    FieldSnapshot s{g.t(n), 1e-3, Array2(g.nx + 1, g.ny + 1)};
    for (int i = 0; i <= g.nx; ++i)
      for (int j = 0; j <= g.ny; ++j) s.u(i, j) = u(g.x(i), g.y(j), g.t(n));
    h.snapshots.push_back(std::move(s));
  }
  return h;
}

ProblemData linear_data(double v0) {
  return {[](double, double y) { return 1.0 - y; }, [](double y, double) { return 1.0 - y; },
          [v0](double, double) { return v0; }};
}

}  // namespace

TEST_CASE("estimates of the linear profile") {
  const GridSpec g{16, 32, 8, 2.0, 0.5};
  const auto h = history_of(g, [](double, double y, double) { return 1.0 - y; });
  CHECK(comparison_constant(h).c == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bv_seminorm(h) == doctest::Approx(1.0).epsilon(1e-12));  // L T
  const auto n0 = weighted_grad_norms(h, 0.0);
  CHECK(n0.n1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(n0.n2 == doctest::Approx(1.0).epsilon(1e-12));
  const auto n1 = weighted_grad_norms(h, 1.0);
  CHECK(n1.n1 == doctest::Approx(0.5).epsilon(1e-12));  // midpoint rule is exact for linear weights
  CHECK(weighted_dyy_measure(h, 1.0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(weighted_grad_norms(h, -1.0), ParameterError);
  CHECK_THROWS_AS(weighted_dyy_measure(h, 0.0), ParameterError);
}

TEST_CASE("comparison constant of a scaled profile") {
  const GridSpec g{8, 16, 4, 2.0, 0.5};
  CHECK(comparison_constant(history_of(g, [](double, double y, double) { return 2.0 * (1.0 - y); })).c ==
        doctest::Approx(2.0));
  const auto flat = comparison_constant(history_of(g, [](double, double y, double) { return y < 0.5 ? 1.0 : 0.0; }));
  CHECK(flat.degenerate);
}

TEST_CASE("weighted second-derivative measure of a parabola") {
  const GridSpec g{8, 64, 4, 2.0, 0.5};
  // u_yy = 2, so int (1-y) |u_yy| = L T
  const auto h = history_of(g, [](double, double y, double) { return (1.0 - y) * (1.0 - y); });
  CHECK(weighted_dyy_measure(h, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("weak residual is linear in the test function") {
  const GridSpec g{16, 16, 16, 2.0, 0.5};
  const auto p = assemble(accelerating_flow(2.0, 0.5), linear_data(-0.5), g);
  const auto h = history_of(g, [](double x, double y, double t) { return (1.0 - y) * (1.0 + 0.2 * x * t); });
  const auto fam = test_function_family(2.0, 0.5);
  REQUIRE(fam.size() == 6);
  const double r1 = weak_residual(h, p, fam[1]), r2 = weak_residual(h, p, fam[4]);
  const double mixed = weak_residual(h, p, combine(fam[1], 0.3, fam[4], -1.7));
  CHECK(mixed == doctest::Approx(0.3 * r1 - 1.7 * r2).epsilon(1e-10));
}

TEST_CASE("exact profile satisfies the weak identity and the traces") {
  const GridSpec g{32, 32, 32, 2.0, 0.5};
  const auto p = assemble(uniform_flow(2.0, 0.5), linear_data(-1.0), g);
  const auto h = solve(p, 1e-3);
  const auto rep = weak_residual(h, p, test_function_family(2.0, 0.5));
  CHECK(rep.max_abs <= 1e-2);
  const auto tr = trace_residual(h, p);
  CHECK(tr.wall_sup <= 1e-6);
  CHECK(tr.initial_sup == 0.0);
  CHECK(tr.top_sup == 0.0);
}

TEST_CASE("stability report is symmetric and exact for identical data") {
  const GridSpec g{16, 16, 16, 2.0, 0.5};
  const auto pa = assemble(accelerating_flow(2.0, 0.5), linear_data(-0.5), g);
  auto d = linear_data(-0.5);
  d.w0 = [](double, double y) { return (1.0 - y) * 1.001; };
  const auto pb = assemble(accelerating_flow(2.0, 0.5), d, g);
  const auto a = solve(pa, 1e-2), b = solve(pb, 1e-2);
  const auto ab = l1_stability(a, b, pa, pb), ba = l1_stability(b, a, pb, pa);
  for (std::size_t k = 0; k < ab.lhs.size(); ++k) CHECK(ab.lhs[k] == ba.lhs[k]);
  CHECK(ab.c6.has_value());
  const auto same = l1_stability(a, a, pa, pa);
  CHECK(same.exact_match);
  CHECK(same.max_lhs == 0.0);
  CHECK_THROWS_AS(l1_stability(a, solve(pa, 1e-3), pa, pa), ParameterError);
}

TEST_CASE("report formats") {
  EstimateReport r;
  r.add({"bv", 1.5, "", "8x8x8", 1e-3, Domain::full, "run"});
  r.verdict("bv_bounded", true);
  CHECK(r.all_pass());
  CHECK(r.find("bv")->value == 1.5);
  CHECK(r.to_text().find("verdict.bv_bounded = pass") != std::string::npos);
  CHECK(r.to_csv().rfind("key,value,grid,eps,domain\n", 0) == 0);
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("manufactured forcing matches the operator by finite differences") {
  const auto flow = accelerating_flow(2.0, 0.5);
  const double eps = 1e-2;
  const auto field = default_manufactured_field(2.0);
  const auto mp = manufacture(field, flow, eps);
  const double d = 1e-4;
  for (double x : {0.3, 1.1}) {
    for (double y : {0.1, 0.6}) {
      for (double t : {0.1, 0.4}) {
        auto u = [&](double a, double b, double c) { return field.u(a, b, c); };
        const double ut = (u(x, y, t + d) - u(x, y, t - d)) / (2 * d);
        const double ux = (u(x + d, y, t) - u(x - d, y, t)) / (2 * d);
        const double uy = (u(x, y + d, t) - u(x, y - d, t)) / (2 * d);
        const double uyy = (u(x, y + d, t) - 2 * u(x, y, t) + u(x, y - d, t)) / (d * d);
        const auto c = coefficients_at(flow, x, y, t);
        const double uu = u(x, y, t);
        const double f = ut - (uu + eps) * (uu + eps) * uyy + (c.a + eps) * ux + c.b * uy + c.c * uu;
        CHECK(mp.forcing(x, y, t) == doctest::Approx(f).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("manufactured solution converges at the design orders") {
  const auto flow = uniform_flow(2.0, 0.5);
  const auto field = default_manufactured_field(2.0);
  const GridSpec base{16, 16, 32, 2.0, 0.5};
  CHECK(refinement_order(field, flow, base, 1e-3, RefineAxis::x).order >= 0.9);
  CHECK(refinement_order(field, flow, base, 1e-3, RefineAxis::y).order >= 1.9);
  CHECK(refinement_order(field, flow, base, 1e-3, RefineAxis::t).order >= 0.9);
}
