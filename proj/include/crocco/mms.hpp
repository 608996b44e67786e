#pragma once

#include <functional>
#include <string>

#include "crocco/problem.hpp"
#include "crocco/solver.hpp"

namespace crocco {

/// A smooth exact field with the derivatives the regularized equation needs.
struct ManufacturedField {
  std::function<double(double, double, double)> u, u_x, u_y, u_yy, u_t;
};

/// (1-y) exp(y/2) (1 + 0.3 sin(pi x / L)) exp(t/2): positive below y = 1, zero on it.
ManufacturedField default_manufactured_field(double length);

/// (1-y)(1 + t/4): exact for the interior equation on uniform flow without forcing.
ManufacturedField linear_manufactured_field();

/// Problem data and forcing for which `field` solves the regularized problem
/// exactly: w0, w1 are its traces, v0 is solved from the wall condition and
/// the forcing is the equation applied to it.
struct ManufacturedProblem {
  ProblemData data;
  Forcing forcing;
};

ManufacturedProblem manufacture(const ManufacturedField& field, const ExternalFlow& flow, double eps);

/// Largest |u - field| over every node of a history.
double max_error(const FieldHistory& history, const ManufacturedField& field);

enum class RefineAxis { x, y, t };

struct OrderResult {
  RefineAxis axis;
  double diff_coarse = 0.0;  // max |u_h - u_{h/2}| on the coarse nodes
  double diff_fine = 0.0;    // max |u_{h/2} - u_{h/4}| on the coarse nodes
  double order = 0.0;        // log2(diff_coarse / diff_fine)
  double error[3] = {0, 0, 0};  // max error against the exact field per level
};

/// Three-level refinement of one axis starting from `base`, the others held fixed.
OrderResult refinement_order(const ManufacturedField& field, const ExternalFlow& flow,
                             const GridSpec& base, double eps, RefineAxis axis);

const char* to_string(RefineAxis axis);

}  // namespace crocco
