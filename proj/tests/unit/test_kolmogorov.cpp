#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "crocco/errors.hpp"
#include "crocco/kolmogorov.hpp"

using namespace crocco;

namespace {

BoxField constant_field(int n, double c) {
  BoxField w(n, n, n);
  for (int a = 0; a <= n; ++a)
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) w(a, i, j) = c;
  return w;
}

}  // namespace

TEST_CASE("kernel value at the unit point") {
  CHECK(gamma0({0, 0, 1}, {}) == doctest::Approx(std::sqrt(3.0) / (2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(gamma0({0.3, 0.1, -0.2}, {}) == 0.0);
  CHECK(gamma0({0, 0, 0}, {}) == 0.0);
}

TEST_CASE("kernel carries unit mass in both variables") {
  for (double s : {0.1, 1.0}) {
    CHECK(std::abs(gamma0_mass(s, {0.2, -0.4, 0.0}) - 1.0) <= 1e-8);
    CHECK(std::abs(gamma0_mass(s, {0.2, -0.4, 0.0}, true) - 1.0) <= 1e-8);
  }
  CHECK_THROWS_AS(gamma0_mass(0.0), ParameterError);
}

TEST_CASE("kernel scales under the anisotropic dilation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(-1.0, 1.0), mu(0.5, 2.0), tt(0.05, 1.0);
  for (int k = 0; k < 100; ++k) {
    const KernelPoint z{pos(rng), pos(rng), tt(rng)};
    CHECK(dilation_defect(z, mu(rng)) <= 1e-12);
  }
}

TEST_CASE("kernel residual converges at second order") {
  const KernelPoint z{0.1, 0.2, 1.0};
  const double r1 = std::abs(l0_residual(z, {}, 0.01));
  const double r2 = std::abs(l0_residual(z, {}, 0.005));
  CHECK(std::log2(r1 / r2) >= 1.9);
  CHECK_THROWS_AS(l0_residual({0, 0, 0.05}, {}, 0.01), ParameterError);
}

TEST_CASE("box volumes from cell counts") {
  const double r = 0.5;
  for (auto kind : {BoxKind::full, BoxKind::past, BoxKind::slab}) {
    const Box b{r, kind};
    CHECK(counted_volume(b, 120) == doctest::Approx(b.volume()).epsilon(0.03));
  }
  CHECK(Box{r, BoxKind::full}.volume() == doctest::Approx(8.0 * std::pow(r, 6)));
}

TEST_CASE("default cut-off passes every sampled property") {
  const Cutoff c(CutoffSpec{});
  for (const auto& chk : certify_cutoff(c)) {
    INFO(chk.item);
    CHECK(chk.pass);
  }
  CHECK(c.phi({0, 0, 0}) == 1.0);
  CHECK(c.phi({0, 1.0, -1e-6}) == 0.0);  // |y| >= r / theta
  CHECK_NOTHROW(make_cutoff(CutoffSpec{}));
}

TEST_CASE("cut-off rejects bad parameters") {
  CHECK_THROWS_AS(Cutoff(CutoffSpec{0.1, 0.009, 0.04, 0.9}), ParameterError);
  CHECK_THROWS_AS(Cutoff(CutoffSpec{0.01, 0.009, 0.2, 0.9}), ParameterError);
  // alpha1 below theta leaves no room for the strict ramp
  CHECK_THROWS_AS(make_cutoff(CutoffSpec{0.01, 0.009, 0.005, 0.9}), ParameterError);
}

TEST_CASE("chi derivative matches finite differences") {
  const Cutoff c(CutoffSpec{});
  const double r = c.spec().r;
  for (double s : {0.5 * r, 0.7 * r, 0.9 * r}) {
    const double h = 1e-7 * r;
    CHECK(c.chi_prime(s) == doctest::Approx((c.chi(s + h) - c.chi(s - h)) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("mean value of a constant field is the constant") {
  const Cutoff c(CutoffSpec{});
  const auto w = constant_field(16, 2.5);
  CHECK(mean_value_i1(w, c, {0, 0, 0}) == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(mean_value(constant_field(16, 0.0), c, 3).i0 == 0.0);
}

TEST_CASE("weak Poincare on trivial fields") {
  const Cutoff c(CutoffSpec{});
  const auto zero = weak_poincare_ratio(constant_field(16, 0.0), c, 3);
  CHECK(zero.vacuous);
  CHECK_FALSE(zero.hard_violation);
}

TEST_CASE("log transforms stay in range") {
  const double h = 0.01;
  CHECK(log_transform(0.0, h, LogVariant::poincare) == doctest::Approx(log_bound(h, LogVariant::poincare)));
  CHECK(log_transform(h, h, LogVariant::poincare) == 0.0);
  CHECK(log_transform(0.25, 0.25, LogVariant::poincare) == 0.0);
  CHECK(log_transform(0.0, h, LogVariant::density) == doctest::Approx(log_bound(h, LogVariant::density)));
  for (double u : {0.0, 1e-4, 1e-3, 0.1, 2.0}) {
    const double w = log_transform(u, h, LogVariant::poincare);
    CHECK(w >= 0.0);
    CHECK(w <= log_bound(h, LogVariant::poincare));
  }
  CHECK_THROWS_AS(log_subsolution(constant_field(4, 1.0), 0.5), ParameterError);
}

TEST_CASE("rough coefficients are bounded and reproducible") {
  const auto cb = model_scenarios("checkerboard", 4.0);
  const auto r1 = model_scenarios("seeded-random", 4.0, 3);
  const auto r2 = model_scenarios("seeded-random", 4.0, 3);
  for (double x : {-0.9, -0.1, 0.3}) {
    for (double y : {-0.7, 0.2}) {
      for (double t : {-0.8, -0.1}) {
        const double v = cb.a(x, y, t);
        CHECK((v == 4.0 || v == 0.25));
        CHECK(r1.a(x, y, t) == r2.a(x, y, t));
        CHECK(r1.a(x, y, t) >= 0.25);
        CHECK(r1.a(x, y, t) <= 4.0);
      }
    }
  }
  CHECK(model_scenarios("constant", 2.0).a(0.1, 0.2, -0.3) == 1.0);
  CHECK_THROWS_AS(model_scenarios("plaid", 2.0), ParameterError);
}

TEST_CASE("model solver keeps the linear profile with a constant coefficient") {
  const ModelProblem p{model_scenarios("constant", 1.0), model_data("linear"), XBoundary::periodic};
  const auto u = solve_model(p, 16, 16, 16);
  for (int j = 0; j <= 16; ++j) CHECK(u(16, 5, j) == doctest::Approx(1.0 - u.y(j)).epsilon(1e-12));
  CHECK_THROWS_AS(solve_model(p, 64, 16, 16), ConfigError);
}

TEST_CASE("model solver reproduces the kernel") {
  const KernelPoint src{0.0, 0.0, -1.5};
  const ModelProblem p{model_scenarios("constant", 1.0),
                       [src](double x, double y, double t) { return gamma0({x, y, t}, src); }, XBoundary::dirichlet};
  auto err = [&](int n) {
    const auto u = solve_model(p, n, n, 2 * n);
    double m = 0.0;
    for (int i = n / 4; i <= 3 * n / 4; ++i)
      for (int j = n / 4; j <= 3 * n / 4; ++j) m = std::max(m, std::abs(u(2 * n, i, j) - gamma0({u.x(i), u.y(j), 0.0}, src)));
    return m;
  };
  const double e1 = err(16), e2 = err(32);
  CHECK(e2 < e1);
  CHECK(e2 < 0.02);
}

TEST_CASE("density ratio of the unit field is one") {
  const auto u = constant_field(16, 1.0);
  const std::vector<double> hs{0.01, 0.001};
  const auto d = density_ratio(u, 0.9, hs, 0.05, 0.9);
  CHECK(d.hypothesis_met);
  CHECK(d.min_ratio == 1.0);
  CHECK(d.pass());
  CHECK_FALSE(density_ratio(constant_field(16, 0.0), 0.9, hs, 0.05, 0.9).hypothesis_met);
}

TEST_CASE("oscillation of the linear profile") {
  const ModelProblem p{model_scenarios("constant", 1.0), model_data("linear"), XBoundary::periodic};
  const auto u = solve_model(p, 16, 16, 16);
  const std::vector<double> rs{0.4, 0.2, 0.1};
  const auto tab = oscillation_table(u, 0.3, rs);
  for (const auto& row : tab.rows) {
    CHECK(row.osc_big == doctest::Approx(2.0 * row.r).epsilon(1e-9));
    CHECK(row.ratio == doctest::Approx(0.3).epsilon(1e-9));
  }
  CHECK(tab.holder_exponent == doctest::Approx(1.0).epsilon(1e-9));
  const auto flat = oscillation_table(constant_field(8, 3.0), 0.5, rs);
  CHECK(flat.beta_bar == 0.0);
}
