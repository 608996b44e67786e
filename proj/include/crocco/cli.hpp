#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crocco/estimates.hpp"
#include "crocco/grid.hpp"
#include "crocco/kolmogorov.hpp"

namespace crocco {

/// One rough-coefficient model run: "checkerboard:4", "seeded-random:4".
struct RoughRun {
  std::string kind;
  double lambda = 2.0;
  std::string label() const;
};

struct RunConfig {
  std::string scenario;
  std::string source;  // file the config came from, for messages

  // Crocco problem. Empty strings and unset optionals take the scenario default.
  std::string flow;        // uniform | accelerating | decelerating | table
  std::string flow_table;  // CSV with columns x,t,U when flow = table
  std::string data;        // linear | favorable
  std::optional<double> v0;
  GridSpec grid;
  std::vector<double> eps_list{1e-3};
  std::vector<double> alpha_list{0.0, 1.0, 2.0};
  double alpha_dyy = 1.0;
  double weak_alpha = 2.0;
  bool refine_check = false;  // repeat the grid-sensitive checks on the doubled grid
  double perturbation = 1e-3;
  std::vector<std::string> families{"initial", "inflow", "suction"};

  // Kolmogorov lab.
  CutoffSpec cutoff;
  double box_alpha = 0.05;  // the time depth alpha of the density slab
  double h1 = 0.01;
  double theta_bar = 0.5;
  std::vector<double> r_list{0.4, 0.2, 0.1};
  double r_density = 0.9;
  std::vector<double> h_list{0.01, 0.005, 0.001};
  std::vector<RoughRun> rough_runs{{"checkerboard", 2.0}, {"checkerboard", 4.0}, {"seeded-random", 4.0}};
  std::string model_data = "half";
  int model_n = 64;
  double poincare_level = 0.25;  // origin value of the scaled field, in units of h1
  std::uint64_t seed = 1;

  int fields_stride = 1;
  std::string out;
};

/// Flat `key = value` lines, `#` comments, comma lists. Unknown or repeated
/// keys, syntax errors and a missing `scenario` raise ConfigError with the line.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& name = "<text>");

/// The named scenarios, in catalog order.
const std::vector<std::string>& scenario_catalog();

/// Checks the config against its scenario: known names, grid counts, CFL,
/// readable table files, data hypotheses. Throws the matching error type.
void check_config(const RunConfig& config);

struct ScenarioOutput {
  std::string scenario;
  std::string header;  // "# crocco-prandtl <version> <scenario> <grid> <eps>"
  EstimateReport report;
  std::map<std::string, std::string> tables;  // artifact file name -> body (without header)
  double seconds = 0.0;                       // wall time, kept out of every artifact
};

/// Runs one scenario. Module errors propagate unchanged.
ScenarioOutput run_scenario(const RunConfig& config);

/// Writes report.txt, report.csv and every table under dir, each led by the header.
void write_artifacts(const ScenarioOutput& output, const std::string& dir);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string value;
  std::string tolerance;
  std::string detail;
};

struct AcceptanceResult {
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
  std::string to_csv() const;
};

/// Runs criteria 1..12 from the configs in suite_dir. Criterion 12 repeats
/// 1..11 and compares the CSV bytes. Artifacts go under out_dir when given.
AcceptanceResult run_acceptance(const std::string& suite_dir, const std::string& out_dir, std::ostream& log);

/// Process exit codes of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_verdict = 1, exit_config = 2, exit_numerical = 3 };

const char* version();

}  // namespace crocco
