#include "doctest.h"

#include "crocco/cli.hpp"
#include "crocco/errors.hpp"

using namespace crocco;

TEST_CASE("minimal config takes the defaults") {
  const auto c = parse_config_text("scenario = exact_profile\n");
  CHECK(c.grid.nx == 64);
  CHECK(c.grid.ny == 64);
  CHECK(c.grid.nt == 64);
  REQUIRE(c.eps_list.size() == 1);
  CHECK(c.eps_list[0] == 1e-3);
}

TEST_CASE("config lists, comments and rough runs") {
  const auto c = parse_config_text(
      "# comment\n"
      "scenario = oscillation_lab   # trailing\n"
      "eps_list = 1e-1, 1e-2,1e-3\n"
      "rough_runs = checkerboard:2, seeded-random:4\n"
      "refine_check = true\n");
  CHECK(c.eps_list == std::vector<double>{1e-1, 1e-2, 1e-3});
  REQUIRE(c.rough_runs.size() == 2);
  CHECK(c.rough_runs[1].kind == "seeded-random");
  CHECK(c.rough_runs[1].lambda == 4.0);
  CHECK(c.refine_check);
}

TEST_CASE("config errors carry the line number") {
  auto message = [](const std::string& text) {
    try {
      parse_config_text(text, "x.conf");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("scenario = exact_profile\nbogus = 1\n").find("x.conf:2: unknown key 'bogus'") != std::string::npos);
  CHECK(message("scenario = exact_profile\nNx 12\n").find("x.conf:2") != std::string::npos);
  CHECK(message("scenario = exact_profile\nNx = twelve\n").find("bad value") != std::string::npos);
  CHECK(message("scenario = exact_profile\nNx = 8\nNx = 16\n").find("repeated") != std::string::npos);
  CHECK(message("Nx = 8\n").find("missing required key 'scenario'") != std::string::npos);
  CHECK(!message("scenario = exact_profile\nNy = 2\n").empty());
}

TEST_CASE("config checks reject bad scenarios and CFL violations") {
  CHECK_THROWS_AS(check_config(parse_config_text("scenario = warp\n")), ConfigError);
  CHECK_THROWS_AS(check_config(parse_config_text("scenario = favorable_accel\nL = 1\nT = 1\n")), ConfigError);
  CHECK_THROWS_AS(check_config(parse_config_text("scenario = exact_profile\nv0 = 0.5\n")), ValidationError);
  CHECK_THROWS_AS(check_config(parse_config_text("scenario = viscosity_sweep\neps_list = 1e-3, 1e-2\n")),
                  ConfigError);
  CHECK_THROWS_AS(check_config(parse_config_text("scenario = kolmogorov_checks\ntheta = 0.2\n")), ParameterError);
  CHECK_NOTHROW(check_config(parse_config_text("scenario = exact_profile\n")));
}

TEST_CASE("zero perturbation reports an exact match") {
  const auto c = parse_config_text(
      "scenario = stability_perturb\nNx = 16\nNy = 16\nNt = 16\nperturbation = 0\neps = 1e-2\n");
  const auto out = run_scenario(c);
  const auto* e = out.report.find("l1_stability");
  REQUIRE(e != nullptr);
  CHECK(e->text == "exact-match");
  CHECK(out.header == "# crocco-prandtl " + std::string(version()) + " stability_perturb 16x16x16 0.01");
}

TEST_CASE("exact profile scenario at a small grid") {
  const auto out = run_scenario(parse_config_text("scenario = exact_profile\nNx = 16\nNy = 16\nNt = 16\n"));
  CHECK(out.report.all_pass());
  CHECK(out.report.find("comparison_constant")->value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(out.tables.count("fields.csv") == 1);
}
