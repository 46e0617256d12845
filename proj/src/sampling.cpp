#include "sfvol/sampling.hpp"

#include <sstream>

namespace sfvol {

void GammaParams::validate() const {
  if (std::isfinite(shape) && std::isfinite(rate) && shape > 0.0 && rate > 0.0) return;
  std::ostringstream msg;
  msg << "gamma parameters must be finite and positive, got shape=" << shape
      << " rate=" << rate;
  throw DomainError(msg.str());
}

}  // namespace sfvol
