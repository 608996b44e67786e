#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "crocco/cli.hpp"
#include "crocco/errors.hpp"

namespace fs = std::filesystem;
using namespace crocco;

namespace {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e)) return exit_numerical;
  if (dynamic_cast<const Error*>(&e)) return exit_config;
  return exit_numerical;
}

void mark_failed(const std::string& dir, const std::string& message) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream(fs::path(dir) / "FAILED") << message << "\n";
}

int cmd_run(const std::string& config_path, std::string out_dir) {
  RunConfig config;
  try {
    config = parse_config(config_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
  if (out_dir.empty()) out_dir = config.out.empty() ? "out/" + config.scenario : config.out;
  ScenarioOutput output;
  try {
    output = run_scenario(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    mark_failed(out_dir, e.what());
    return exit_code_for(e);
  }
  write_artifacts(output, out_dir);
  std::error_code ec;
  fs::remove(fs::path(out_dir) / "FAILED", ec);
  std::cout << output.report.to_text();
  std::cout << "artifacts: " << out_dir << "\n";
  return output.report.all_pass() ? exit_ok : exit_verdict;
}

int cmd_validate(const std::string& config_path) {
  try {
    check_config(parse_config(config_path));
  } catch (const std::exception& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return exit_code_for(e);
  }
  std::cout << "ok\n";
  return exit_ok;
}

int cmd_acceptance(const std::string& suite, const std::string& out_dir) {
  AcceptanceResult result;
  try {
    result = run_acceptance(suite, out_dir, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  for (const auto& c : result.criteria) {
    std::cout << "criterion " << c.id << " " << c.name << ": " << (c.pass ? "PASS" : "FAIL") << "  value=" << c.value;
    if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
    std::cout << "\n";
  }
  std::cout << result.to_csv();
  return result.all_pass() ? exit_ok : exit_verdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prandtl boundary layers in Crocco variables: solver and estimate checks"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite;
  auto* run = app.add_subcommand("run", "run one scenario and write its artifacts");
  run->add_option("--config", config_path, "scenario config file")->required();
  run->add_option("--out", out_dir, "artifact directory");

  auto* val = app.add_subcommand("validate", "check a config and its data without solving");
  val->add_option("--config", config_path, "scenario config file")->required();

  auto* acc = app.add_subcommand("acceptance", "run the acceptance criteria");
  acc->add_option("--suite", suite, "directory holding the scenario configs")->required();
  acc->add_option("--out", out_dir, "artifact directory");

  app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  if (*run) return cmd_run(config_path, out_dir);
  if (*val) return cmd_validate(config_path);
  if (*acc) return cmd_acceptance(suite, out_dir);
  std::cout << "crocco-prandtl " << version() << "\n";
  return exit_ok;
}
