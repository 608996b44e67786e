#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "crocco/cli.hpp"
#include "crocco/errors.hpp"
#include "crocco/tolerances.hpp"

namespace crocco {

namespace {

namespace fs = std::filesystem;

struct Criterion {
  int id;
  std::string name;
  std::string config;                               // file in the suite directory
  std::function<bool(const std::string&)> member;   // verdict names that belong to it
  std::string value_key;                            // report entry shown as the value
  std::string tolerance;
};

bool starts(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "exact_stationary_reproduction", "exact_profile.conf",
       [](const std::string& v) { return v == "exact_reproduction" || v == "runtime"; }, "summary.max_deviation",
       "max|u-(1-y)|<=1e-08; runtime<10s"},
      {2, "mms_convergence", "manufactured.conf", [](const std::string& v) { return starts(v, "order_"); }, "order_",
       "order_x>=0.9; order_y>=1.9; order_t>=0.9"},
      {3, "eps_uniform_bounds", "favorable_accel.conf", [](const std::string& v) { return starts(v, "uniform."); },
       "spread.", "(max-min)/max<0.1 per quantity"},
      {4, "vanishing_viscosity_cauchy", "viscosity_sweep.conf", [](const std::string& v) { return starts(v, "cauchy_"); },
       "final_over_proxy", "strictly decreasing; final<10*grid_proxy"},
      {5, "weak_identity", "exact_profile.conf",
       [](const std::string& v) { return v == "weak_residual" || v == "weak_residual_refinement" || v == "trace_wall"; },
       "summary.weak_residual_max", "residual<=1e-2; refinement factor>=1.8; wall trace<=1e-6"},
      {6, "l1_stability", "stability_perturb.conf",
       [](const std::string& v) { return starts(v, "stability.") || v == "uniqueness"; }, "c6_variation.",
       "finite c6; variation<0.2; identical lhs<=1e-12"},
      {7, "fundamental_solution", "kolmogorov_checks.conf", [](const std::string& v) { return starts(v, "gamma0."); },
       "gamma0.normalization", "|mass-1|<=1e-8; dilation<=1e-12; order>=1.9"},
      {8, "cutoff_certification", "kolmogorov_checks.conf", [](const std::string& v) { return starts(v, "cutoff."); },
       "cutoff.transport_sign", "all sampled properties hold on 33^3"},
      {9, "density_estimate", "oscillation_lab.conf", [](const std::string& v) { return starts(v, "density."); },
       "density.min_ratio.", "unit ratio=1; ratio>=1/11 for h<=h1"},
      {10, "weak_poincare", "oscillation_lab.conf", [](const std::string& v) { return starts(v, "poincare."); },
       "poincare.C_change", "no hard violation; C change<=0.25"},
      {11, "oscillation_decay", "oscillation_lab.conf", [](const std::string& v) { return starts(v, "oscillation."); },
       "oscillation.beta_bar", "beta_bar<1; alpha_H>0; linear control=theta_bar+-1e-9"},
  };
  return list;
}

// Value column: one number, or the prefix-matched entries joined by ';'.
std::string value_of(const EstimateReport& rep, const std::string& key) {
  if (const auto* e = rep.find(key)) return e->text.empty() ? format_number(e->value) : e->text;
  std::string joined;
  for (const auto& e : rep.entries()) {
    if (!starts(e.key, key)) continue;
    if (e.key.ends_with("_interior")) continue;
    if (!joined.empty()) joined += ";";
    joined += e.key.substr(key.size()) + "=" + (e.text.empty() ? format_number(e.value) : e.text);
  }
  return joined;
}

std::string csv_cell(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

struct Pass {
  std::vector<CriterionResult> results;
  std::string bytes;  // every CSV produced, concatenated in a fixed order
  std::map<std::string, ScenarioOutput> outputs;
};

Pass run_once(const std::string& suite_dir, std::ostream& log) {
  Pass pass;
  std::map<std::string, std::string> errors;
  for (const auto& c : criteria()) {
    if (pass.outputs.count(c.config) || errors.count(c.config)) continue;
    const auto path = (fs::path(suite_dir) / c.config).string();
    try {
      auto cfg = parse_config(path);
      auto out = run_scenario(cfg);
      log << "  ran " << c.config << " (" << out.scenario << ") in " << out.seconds << " s\n";
      pass.outputs.emplace(c.config, std::move(out));
    } catch (const Error& e) {
      errors[c.config] = e.what();
      log << "  " << c.config << " failed: " << e.what() << "\n";
    }
  }
  for (const auto& c : criteria()) {
    CriterionResult r{c.id, c.name, false, "", c.tolerance, ""};
    if (errors.count(c.config)) {
      r.value = "error";
      r.detail = errors[c.config];
    } else {
      const auto& rep = pass.outputs.at(c.config).report;
      int members = 0;
      bool ok = true;
      for (const auto& v : rep.verdicts()) {
        if (!c.member(v.name)) continue;
        ++members;
        if (!v.pass) {
          ok = false;
          r.detail += (r.detail.empty() ? "" : "; ") + v.name;
        }
      }
      r.pass = ok && members > 0;
      if (members == 0) r.detail = "no verdicts produced";
      r.value = value_of(rep, c.value_key);
    }
    pass.results.push_back(std::move(r));
  }
  for (const auto& [name, out] : pass.outputs) {
    pass.bytes += out.header + "\n" + out.report.to_csv();
    for (const auto& [file, body] : out.tables)
      if (file.ends_with(".csv")) pass.bytes += file + "\n" + body;
  }
  return pass;
}

}  // namespace

bool AcceptanceResult::all_pass() const {
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return !criteria.empty();
}

std::string AcceptanceResult::to_csv() const {
  std::ostringstream out;
  out << "criterion,verdict,value,tolerance\n";
  for (const auto& c : criteria) {
    out << c.id << "," << (c.pass ? "pass" : "fail") << "," << csv_cell(c.value) << "," << csv_cell(c.tolerance) << "\n";
  }
  return out.str();
}

AcceptanceResult run_acceptance(const std::string& suite_dir, const std::string& out_dir, std::ostream& log) {
  if (!fs::is_directory(suite_dir)) throw ConfigError("suite directory '" + suite_dir + "' does not exist");
  log << "pass 1\n";
  auto first = run_once(suite_dir, log);
  log << "pass 2\n";
  auto second = run_once(suite_dir, log);

  AcceptanceResult result;
  result.criteria = first.results;
  AcceptanceResult again;
  again.criteria = second.results;
  const bool same = first.bytes == second.bytes && result.to_csv() == again.to_csv();
  result.criteria.push_back({12, "determinism", same, same ? "identical" : "differs", "bit-identical CSV artifacts",
                             same ? "" : "second pass produced different bytes"});

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    for (const auto& [config, out] : first.outputs) write_artifacts(out, (fs::path(out_dir) / out.scenario).string());
    std::ofstream f(fs::path(out_dir) / "acceptance.csv", std::ios::binary);
    f << "# crocco-prandtl " << version() << " acceptance suite none\n" << result.to_csv();
  }
  return result;
}

}  // namespace crocco
