#pragma once

#include <string>

namespace crocco {

/// Tensor grid on Q_T = (0,L) x (0,1) x (0,T). Nodes are i = 0..nx, j = 0..ny,
/// n = 0..nt; y = 1 is node j = ny.
struct GridSpec {
  int nx = 64;
  int ny = 64;
  int nt = 64;
  double length = 2.0;
  double horizon = 0.5;

  double dx() const { return length / nx; }
  double dy() const { return 1.0 / ny; }
  double dt() const { return horizon / nt; }
  double x(int i) const { return i * dx(); }
  double y(int j) const { return j * dy(); }
  double t(int n) const { return n * dt(); }

  /// Throws ConfigError unless every count is at least 4 and extents are positive.
  void check() const;

  /// Short identifier such as "64x64x64", used in reports and artifact headers.
  std::string id() const;

  bool operator==(const GridSpec&) const = default;
};

}  // namespace crocco
