#include <cmath>

#include "doctest.h"

#include "crocco/errors.hpp"
#include "crocco/solver.hpp"

using namespace crocco;

namespace {

ProblemData linear_data(double v0) {
  return {[](double, double y) { return 1.0 - y; }, [](double y, double) { return 1.0 - y; },
          [v0](double, double) { return v0; }};
}

double max_diff(const Array2& a, const Array2& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

}  // namespace

TEST_CASE("linear profile is a fixed point of the step on uniform flow") {
  GridSpec g;
  const auto p = assemble(uniform_flow(g.length, g.horizon), linear_data(-1.0), g);
  for (double eps : {1e-1, 1e-3, 1e-5}) {
    const auto s0 = initial_snapshot(p, eps);
    StepDiagnostics d;
    const auto s1 = step(s0, p, eps, {}, &d);
    CHECK(max_diff(s0.u, s1.u) <= 1e-10);
    CHECK(d.newton_iterations <= 5);
  }
}

TEST_CASE("full solve keeps the linear profile") {
  GridSpec g;
  const auto p = assemble(uniform_flow(g.length, g.horizon), linear_data(-1.0), g);
  const auto h = solve(p, 1e-3);
  REQUIRE(h.snapshots.size() == 65);
  CHECK(max_diff(h.at(64), p.w0) <= 1e-10);
}

TEST_CASE("cfl violation is a configuration error") {
  GridSpec g{64, 64, 8, 1.0, 1.0};
  const auto p = assemble(uniform_flow(g.length, g.horizon), linear_data(-1.0), g);
  CHECK_THROWS_AS(solve(p, 1e-3), ConfigError);
}

TEST_CASE("sweep requires decreasing eps") {
  GridSpec g{8, 8, 8, 2.0, 0.5};
  const auto p = assemble(uniform_flow(g.length, g.horizon), linear_data(-1.0), g);
  const double bad[] = {1e-3, 1e-2};
  CHECK_THROWS_AS(viscosity_sweep(p, bad), ParameterError);
  const double good[] = {1e-1, 1e-2, 1e-3};
  const auto t = viscosity_sweep(p, good);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].l1_diff <= 1e-12);
}
