#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "crocco/errors.hpp"
#include "crocco/flow.hpp"
#include "crocco/grid.hpp"
#include "crocco/problem.hpp"
#include "crocco/table.hpp"
#include "crocco/transform.hpp"
#include "crocco/tridiagonal.hpp"

using namespace crocco;

TEST_CASE("grid spacing and checks") {
  GridSpec g{16, 8, 4, 2.0, 0.5};
  CHECK(g.dx() == 0.125);
  CHECK(g.y(8) == 1.0);
  CHECK(g.t(4) == 0.5);
  CHECK_NOTHROW(g.check());
  CHECK_THROWS_AS((GridSpec{3, 8, 8, 1, 1}.check()), ConfigError);
  CHECK_THROWS_AS((GridSpec{8, 8, 8, 0, 1}.check()), ConfigError);
}

TEST_CASE("tridiagonal solve against a dense product") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int n = 40;
  std::vector<double> lo(n), di(n), up(n), x(n), rhs(n);
  for (int k = 0; k < n; ++k) {
    lo[k] = k > 0 ? d(rng) : 0.0;
    up[k] = k + 1 < n ? d(rng) : 0.0;
    di[k] = 3.0 + d(rng);
    x[k] = d(rng);
  }
  for (int k = 0; k < n; ++k) {
    rhs[k] = di[k] * x[k] + (k > 0 ? lo[k] * x[k - 1] : 0.0) + (k + 1 < n ? up[k] * x[k + 1] : 0.0);
  }
  TridiagonalSolver(lo, di, up).solve(rhs);
  for (int k = 0; k < n; ++k) CHECK(rhs[k] == doctest::Approx(x[k]).epsilon(1e-13));
}

TEST_CASE("built-in flows obey the pressure relation") {
  for (const char* name : {"uniform", "accelerating", "decelerating"}) {
    const auto f = builtin_flow(name, 2.0, 0.5);
    CHECK(derivative_consistency(f, 1e-5) <= 1e-8);
  }
  const auto acc = accelerating_flow(2.0, 0.5);
  CHECK(acc.dxP(0.3, 0.2) == doctest::Approx(-1.0));
  const auto dec = decelerating_flow(2.0, 0.5);
  CHECK(dec.dxP(1.0, 0.1) > 0.0);
  CHECK_FALSE(pressure_gradient(dec, GridSpec{8, 8, 8, 2.0, 0.5}).favorable);
  CHECK_THROWS_AS(builtin_flow("jet", 1, 1), ConfigError);
}

TEST_CASE("tabulated flow reproduces a quadratic") {
  const auto path = std::filesystem::temp_directory_path() / "crocco_flow_table.csv";
  {
    std::ofstream out(path);
    out << "x,t,U\n";
    for (int i = 0; i <= 10; ++i)
      for (int n = 0; n <= 5; ++n) {
        const double x = 0.2 * i, t = 0.1 * n;
        out << x << "," << t << "," << 1.0 + 0.5 * t + 0.1 * x * x << "\n";
      }
  }
  const auto f = flow_from_table(path.string(), 2.0, 0.5);
  CHECK(f.U(0.4, 0.2) == doctest::Approx(1.0 + 0.1 + 0.016));
  CHECK(f.dxU(0.4, 0.2) == doctest::Approx(0.08).epsilon(1e-9));
  CHECK(f.dtU(0.4, 0.2) == doctest::Approx(0.5).epsilon(1e-9));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(flow_from_table("/nonexistent/flow.csv", 1, 1), ConfigError);
}

TEST_CASE("table rejects broken lattices") {
  CHECK_THROWS_AS(Table2D({0, 1}, {0, 1}, {1, 2, 3}), ValidationError);
  CHECK_THROWS_AS(Table2D({1, 0}, {0, 1}, {1, 2, 3, 4}), ValidationError);
}

TEST_CASE("coefficients at a point") {
  const auto f = accelerating_flow(2.0, 0.5);
  const auto c = coefficients_at(f, 0.5, 0.25, 0.2);
  // U = 1.2, dtU = 1, dxU = 0, dxP = -1
  CHECK(c.a == doctest::Approx(0.25 * 1.2));
  CHECK(c.b == doctest::Approx(0.75 / 1.2));
  CHECK(c.c == doctest::Approx(1.0 / 1.2));
  CHECK(c.px_over_u == doctest::Approx(-1.0 / 1.2));
}

TEST_CASE("validation flags each broken condition") {
  const GridSpec g{8, 8, 8, 2.0, 0.5};
  const auto f = uniform_flow(2.0, 0.5);
  ProblemData good{[](double, double y) { return 1.0 - y; }, [](double y, double) { return 1.0 - y; },
                   [](double, double) { return -1.0; }};
  CHECK(validate(good, f, g).ok());

  auto has = [](const ValidationReport& r, const std::string& cond) {
    for (const auto& i : r.issues)
      if (i.condition == cond) return true;
    return false;
  };
  auto blowing = good;
  blowing.v0 = [](double, double) { return 0.2; };
  CHECK(has(validate(blowing, f, g), "suction_sign"));
  auto flat = good;
  flat.w0 = [](double, double y) { return (1.0 - y) * (1.0 - y); };
  CHECK(has(validate(flat, f, g), "linear_bound_lower"));
  auto top = good;
  top.w1 = [](double y, double) { return 1.1 - y; };
  CHECK(has(validate(top, f, g), "top_dirichlet"));
  CHECK(has(validate(good, decelerating_flow(2.0, 0.5), g), "favorable_pressure"));
  const auto steep = validate(ProblemData{[](double, double y) { return 3.0 * (1.0 - y); }, good.w1, good.v0}, f, g);
  CHECK(steep.c0 == doctest::Approx(3.0));
}

TEST_CASE("crocco transform of an exponential profile") {
  VelocityProfile p{[](double y) { return 1.0 - std::exp(-y); }, [](double y) { return std::exp(-y); }, 20.0};
  const auto c = to_crocco(p, 1.0, 32);
  for (int j = 0; j < 32; ++j) CHECK(c.w[j] == doctest::Approx(1.0 - c.eta(j)).epsilon(1e-10));

  auto round_trip = [&](int n) {
    const auto back = from_crocco(to_crocco(p, 1.0, n), 1.0);
    double m = 0.0;
    for (int j = 0; j <= n / 2; ++j) m = std::max(m, std::abs(back.y[j] + std::log(1.0 - back.u[j])));
    return m;
  };
  const double e1 = round_trip(32), e2 = round_trip(64);
  CHECK(std::log2(e1 / e2) >= 1.9);

  VelocityProfile bent{[](double y) { return std::sin(y); }, {}, 4.0};
  CHECK_THROWS_AS(to_crocco(bent, 1.5, 8), NumericalError);
  const std::vector<double> w{1.0, 0.5, 0.0};
  CHECK_THROWS_AS(from_crocco(w, 0.5, 1.0), NumericalError);
}
