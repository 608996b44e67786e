#include "crocco/grid.hpp"

#include <cmath>

#include "crocco/errors.hpp"

namespace crocco {

void GridSpec::check() const {
  if (nx < 4 || ny < 4 || nt < 4) {
    throw ConfigError("grid counts must be >= 4 (got Nx=" + std::to_string(nx) +
                      ", Ny=" + std::to_string(ny) + ", Nt=" + std::to_string(nt) + ")");
  }
  if (!(length > 0.0) || !(horizon > 0.0) || !std::isfinite(length) || !std::isfinite(horizon)) {
    throw ConfigError("domain extents L and T must be positive and finite");
  }
}

std::string GridSpec::id() const {
  return std::to_string(nx) + "x" + std::to_string(ny) + "x" + std::to_string(nt);
}

}  // namespace crocco
