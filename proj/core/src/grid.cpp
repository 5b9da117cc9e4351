#include "calderon/grid.hpp"

#include <string>

namespace calderon {

void GridSpec::validate() const {
  if (!(half_width > 0.0)) throw InvalidInput("grid half width must be positive");
  if (n < 16) throw InvalidInput("grid resolution must be at least 16, got " + std::to_string(n));
  if ((n & (n - 1)) != 0) throw InvalidInput("grid resolution must be a power of two, got " + std::to_string(n));
}

}  // namespace calderon
