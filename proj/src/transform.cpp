#include "crocco/transform.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>

#include "crocco/errors.hpp"

namespace crocco {

namespace {

constexpr int kMonotoneSamples = 4000;

double derivative(const VelocityProfile& p, double y) {
  if (p.du) return p.du(y);
  const double h = 1e-3 * std::max(1e-3, std::min(1.0, y > 0 ? y : 1.0));
  return (-p.u(y + 2 * h) + 8 * p.u(y + h) - 8 * p.u(y - h) + p.u(y - 2 * h)) / (12 * h);
}

}  // namespace

CroccoProfile to_crocco(const VelocityProfile& profile, double U, int n_eta) {
  if (n_eta < 2) throw NumericalError("to_crocco: need at least 2 eta intervals");
  if (!(U > 0.0)) throw NumericalError("to_crocco: U must be positive");

  std::vector<double> ys(kMonotoneSamples + 1), us(kMonotoneSamples + 1);
  for (int k = 0; k <= kMonotoneSamples; ++k) {
    ys[k] = profile.y_max * k / kMonotoneSamples;
    us[k] = profile.u(ys[k]);
    if (k > 0 && !(us[k] > us[k - 1])) {
      if (us[k - 1] >= U) break;  // already past the free stream; the tail is unused
      std::ostringstream msg;
      msg << "to_crocco: profile is not increasing on [" << ys[k - 1] << ", " << ys[k] << "]";
      throw NumericalError(msg.str());
    }
  }

  CroccoProfile out{1.0 / n_eta, std::vector<double>(n_eta)};
  int bracket = 0;
  for (int j = 0; j < n_eta; ++j) {
    const double target = out.eta(j) * U;
    while (bracket < kMonotoneSamples && us[bracket + 1] < target) ++bracket;
    if (bracket == kMonotoneSamples) {
      throw NumericalError("to_crocco: profile never reaches eta = " + std::to_string(out.eta(j)) +
                           " within y_max");
    }
    double y = ys[bracket];
    if (target > us[bracket]) {
      std::uintmax_t iters = 200;
      const auto root = boost::math::tools::toms748_solve(
          [&](double s) { return profile.u(s) - target; }, ys[bracket], ys[bracket + 1],
          us[bracket] - target, us[bracket + 1] - target,
          boost::math::tools::eps_tolerance<double>(52), iters);
      y = 0.5 * (root.first + root.second);
    }
    out.w[j] = derivative(profile, y) / U;
  }
  return out;
}

PhysicalProfile from_crocco(std::span<const double> w, double d_eta, double U) {
  PhysicalProfile out{std::vector<double>(w.size()), std::vector<double>(w.size())};
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!(w[j] > 0.0)) {
      throw NumericalError("from_crocco: w <= 0 at eta = " + std::to_string(j * d_eta));
    }
    out.u[j] = j * d_eta * U;
    if (j > 0) out.y[j] = out.y[j - 1] + 0.5 * d_eta * (1.0 / w[j - 1] + 1.0 / w[j]);
  }
  return out;
}

PhysicalProfile from_crocco(const CroccoProfile& profile, double U) {
  return from_crocco(profile.w, profile.d_eta, U);
}

}  // namespace crocco
