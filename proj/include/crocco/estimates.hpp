#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crocco/problem.hpp"
#include "crocco/solver.hpp"

namespace crocco {

enum class Domain { full, interior };

const char* to_string(Domain d);

/// Cells kept away from x = 0, x = L, y = 0 and y = 1 by the interior variants.
inline constexpr int kInteriorMargin = 2;

struct ReportEntry {
  std::string key;
  double value = 0.0;
  std::string text;  // non-empty replaces the number, e.g. "exact-match"
  std::string grid;
  double eps = 0.0;
  Domain domain = Domain::full;
  std::string source;  // which run produced it
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Named quantitative results with grid / eps / run provenance.
class EstimateReport {
 public:
  void add(ReportEntry entry) { entries_.push_back(std::move(entry)); }
  void add(std::string key, double value, const std::string& grid, double eps,
           Domain domain = Domain::full, std::string source = {});
  void add_text(std::string key, std::string text, const std::string& grid, double eps,
                std::string source = {});
  void verdict(std::string name, bool pass, std::string detail = {});
  void merge(const EstimateReport& other);

  const std::vector<ReportEntry>& entries() const { return entries_; }
  const std::vector<Verdict>& verdicts() const { return verdicts_; }
  const ReportEntry* find(const std::string& key) const;
  bool all_pass() const;

  /// `key = value` lines followed by one `verdict.<name> = pass|fail` line per check.
  std::string to_text() const;
  /// `key,value,grid,eps,domain`.
  std::string to_csv() const;

 private:
  std::vector<ReportEntry> entries_;
  std::vector<Verdict> verdicts_;
};

/// Shortest round-trip decimal form used in every artifact.
std::string format_number(double v);

/// A smooth test function with its exact first derivatives.
struct TestFunction {
  std::string name;
  std::function<double(double, double, double)> phi, phi_x, phi_y, phi_t;
};

/// sin(pi k x / L) (1-y)^m t exp(-(t/T)^2) for k in {1,2}, m in {0,1,2}:
/// vanishes at t = 0, x = 0 and x = L.
std::vector<TestFunction> test_function_family(double length, double horizon);

/// Linear combination s1 f1 + s2 f2, derivatives included.
TestFunction combine(const TestFunction& f1, double s1, const TestFunction& f2, double s2);

struct ComparisonResult {
  double c = 1.0;                 // max of u/(1-y), (1-y)/u over nodes with y < 1
  bool degenerate = false;        // some node with y < 1 had u <= 0
  std::string degenerate_at;      // first such node
  std::vector<double> per_snapshot;
};

ComparisonResult comparison_constant(const FieldHistory& history);

/// Discrete integral of |u_x| + |u_y| + |u_t| over Q_T (cell-centered
/// differences, midpoint rule).
double bv_seminorm(const FieldHistory& history, Domain domain = Domain::full);

struct WeightedNorms {
  double n1 = 0.0;  // int (1-y)^alpha |u_y|
  double n2 = 0.0;  // int (1-y)^alpha |u_y|^2
};

/// Throws ParameterError if alpha <= -1.
WeightedNorms weighted_grad_norms(const FieldHistory& history, double alpha,
                                  Domain domain = Domain::full);

/// Grid proxy for int (1-y)^alpha |u_yy|: nodal second differences,
/// one-sided on the boundary rows, trapezoid weights. Throws ParameterError
/// if alpha <= 0.
double weighted_dyy_measure(const FieldHistory& history, double alpha,
                            Domain domain = Domain::full);

/// Signed residual of the weak identity for one test function,
///   - int W phi / u |_{t=T}
///   + int [ W phi_t / u + (W phi)_y u_y + (a phi)_x W / u + (W b phi)_y / u + W c phi / u ]
///   + int v0 phi(x, 0, t),
/// with W = (1-y)^alpha, by the midpoint rule over grid cells. The interior
/// variant restricts the volume terms to the margin box and drops the wall term.
double weak_residual(const FieldHistory& history, const CroccoProblem& problem,
                     const TestFunction& phi, double alpha = 2.0, Domain domain = Domain::full);

struct WeakResidualReport {
  std::vector<double> signed_residuals;  // one per test function
  double max_abs = 0.0;
};

WeakResidualReport weak_residual(const FieldHistory& history, const CroccoProblem& problem,
                                 const std::vector<TestFunction>& tests, double alpha = 2.0,
                                 Domain domain = Domain::full);

struct TraceReport {
  double wall_sup = 0.0;     // |u_y - v0 - (dxP/U)/u| at y = 0, t > 0
  double wall_l1 = 0.0;
  double initial_sup = 0.0;  // |u - w0| at t = 0
  double inflow_sup = 0.0;   // |u - w1| at x = 0, t > 0
  double top_sup = 0.0;      // |u| at y = 1
  bool degenerate = false;   // u = 0 on the wall somewhere
};

TraceReport trace_residual(const FieldHistory& history, const CroccoProblem& problem);

struct StabilityReport {
  std::vector<double> t, lhs, rhs;
  double initial_term = 0.0;
  std::vector<double> inflow_term, suction_term;  // cumulative in t
  /// max over t of lhs/rhs where rhs > 0; absent if rhs == 0 at every t.
  std::optional<double> c6;
  bool exact_match = false;     // rhs == 0 and lhs == 0 at every t
  bool hard_violation = false;  // lhs > 0 at some t with rhs == 0
  double max_lhs = 0.0;
};

/// L1 distance of two runs against the three data terms (initial, inflow, suction).
/// Throws ParameterError on grid or eps mismatch.
StabilityReport l1_stability(const FieldHistory& a, const FieldHistory& b, const CroccoProblem& pa,
                             const CroccoProblem& pb);

struct PhysicalStabilityReport {
  std::vector<double> t;
  std::vector<double> physical;  // computed on the physical y of run a
  std::vector<double> crocco;    // int int |w_a - w_b| d eta dx
  double initial_term = 0.0;
  std::vector<double> inflow_term, suction_term;
  double max_route_gap = 0.0;    // max |physical - crocco| / max(crocco, tiny)
};

/// Physical-variable distance of two runs with the same outer flow. The y map
/// of each column comes from the inverse transform; the nodes at y = 1 are dropped.
PhysicalStabilityReport physical_stability(const FieldHistory& a, const FieldHistory& b,
                                           const CroccoProblem& pa, const CroccoProblem& pb);

}  // namespace crocco
