#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "crocco/cli.hpp"
#include "crocco/errors.hpp"

namespace crocco {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty list item");
    out.push_back(item);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::vector<double> to_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(item));
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario", [](RunConfig& c, const std::string& v) { c.scenario = v; }},
      {"flow", [](RunConfig& c, const std::string& v) { c.flow = v; }},
      {"flow_table", [](RunConfig& c, const std::string& v) { c.flow_table = v; }},
      {"data", [](RunConfig& c, const std::string& v) { c.data = v; }},
      {"v0", [](RunConfig& c, const std::string& v) { c.v0 = to_double(v); }},
      {"Nx", [](RunConfig& c, const std::string& v) { c.grid.nx = to_int(v); }},
      {"Ny", [](RunConfig& c, const std::string& v) { c.grid.ny = to_int(v); }},
      {"Nt", [](RunConfig& c, const std::string& v) { c.grid.nt = to_int(v); }},
      {"L", [](RunConfig& c, const std::string& v) { c.grid.length = to_double(v); }},
      {"T", [](RunConfig& c, const std::string& v) { c.grid.horizon = to_double(v); }},
      {"eps", [](RunConfig& c, const std::string& v) { c.eps_list = {to_double(v)}; }},
      {"eps_list", [](RunConfig& c, const std::string& v) { c.eps_list = to_doubles(v); }},
      {"alpha_list", [](RunConfig& c, const std::string& v) { c.alpha_list = to_doubles(v); }},
      {"alpha_dyy", [](RunConfig& c, const std::string& v) { c.alpha_dyy = to_double(v); }},
      {"weak_alpha", [](RunConfig& c, const std::string& v) { c.weak_alpha = to_double(v); }},
      {"refine_check", [](RunConfig& c, const std::string& v) { c.refine_check = to_bool(v); }},
      {"perturbation", [](RunConfig& c, const std::string& v) { c.perturbation = to_double(v); }},
      {"families", [](RunConfig& c, const std::string& v) { c.families = split_list(v); }},
      {"theta", [](RunConfig& c, const std::string& v) { c.cutoff.theta = to_double(v); }},
      {"r", [](RunConfig& c, const std::string& v) { c.cutoff.r = to_double(v); }},
      {"alpha1", [](RunConfig& c, const std::string& v) { c.cutoff.alpha1 = to_double(v); }},
      {"beta", [](RunConfig& c, const std::string& v) { c.cutoff.beta = to_double(v); }},
      {"alpha", [](RunConfig& c, const std::string& v) { c.box_alpha = to_double(v); }},
      {"h1", [](RunConfig& c, const std::string& v) { c.h1 = to_double(v); }},
      {"theta_bar", [](RunConfig& c, const std::string& v) { c.theta_bar = to_double(v); }},
      {"r_list", [](RunConfig& c, const std::string& v) { c.r_list = to_doubles(v); }},
      {"r_density", [](RunConfig& c, const std::string& v) { c.r_density = to_double(v); }},
      {"h_list", [](RunConfig& c, const std::string& v) { c.h_list = to_doubles(v); }},
      {"rough_runs",
       [](RunConfig& c, const std::string& v) {
         c.rough_runs.clear();
         for (const auto& item : split_list(v)) {
           const auto colon = item.find(':');
           if (colon == std::string::npos) throw std::invalid_argument("expected kind:Lambda, got '" + item + "'");
           c.rough_runs.push_back({trim(item.substr(0, colon)), to_double(trim(item.substr(colon + 1)))});
         }
       }},
      {"model_data", [](RunConfig& c, const std::string& v) { c.model_data = v; }},
      {"model_n", [](RunConfig& c, const std::string& v) { c.model_n = to_int(v); }},
      {"poincare_level", [](RunConfig& c, const std::string& v) { c.poincare_level = to_double(v); }},
      {"seed",
       [](RunConfig& c, const std::string& v) {
         std::uint64_t s = 0;
         const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
         if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("not a seed: '" + v + "'");
         c.seed = s;
       }},
      {"fields_stride", [](RunConfig& c, const std::string& v) { c.fields_stride = to_int(v); }},
      {"out", [](RunConfig& c, const std::string& v) { c.out = v; }},
  };
  return table;
}

}  // namespace

std::string RoughRun::label() const {
  std::ostringstream s;
  s << kind << ":" << lambda;
  return s.str();
}

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  RunConfig config;
  config.source = name;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ConfigError(name + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) fail("missing key");
    if (value.empty()) fail("missing value for '" + key + "'");
    const auto it = setters().find(key);
    if (it == setters().end()) fail("unknown key '" + key + "'");
    if (!seen.insert(key).second) fail("repeated key '" + key + "'");
    try {
      it->second(config, value);
    } catch (const std::invalid_argument& e) {
      fail("bad value for '" + key + "': " + e.what());
    }
  }
  if (config.scenario.empty()) throw ConfigError(name + ": missing required key 'scenario'");
  if (seen.count("eps") && seen.count("eps_list")) throw ConfigError(name + ": give either 'eps' or 'eps_list'");
  config.grid.check();
  return config;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto config = parse_config_text(buf.str(), path);
  // Table paths are relative to the config file.
  if (!config.flow_table.empty() && std::filesystem::path(config.flow_table).is_relative()) {
    config.flow_table = (std::filesystem::path(path).parent_path() / config.flow_table).string();
  }
  return config;
}

}  // namespace crocco
