// Runs the twelve acceptance criteria against the scenario configs and
// prints one line per criterion. Thresholds live in crocco/tolerances.hpp.
#include <fstream>
#include <iostream>

#include "crocco/cli.hpp"
#include "crocco/errors.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance SUITE_DIR [OUT_DIR]\n";
    return 2;
  }
  const std::string suite = argv[1], out = argc > 2 ? argv[2] : "";
  crocco::AcceptanceResult result;
  try {
    result = crocco::run_acceptance(suite, out, std::cerr);
  } catch (const crocco::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& c : result.criteria) {
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.id << " " << c.name << "  value=" << c.value
              << "  tolerance=" << c.tolerance;
    if (!c.detail.empty()) std::cout << "  failing: " << c.detail;
    std::cout << "\n";
  }
  return result.all_pass() ? 0 : 1;
}
