#include "mewma/chart.hpp"

#include <stdexcept>
#include <string>

namespace mewma {

ChartConfig::ChartConfig(int p, double lambda, double h4) : p_(p), lambda_(lambda), h4_(h4) {
  if (p < 1) throw std::invalid_argument("ChartConfig: dimension p must be >= 1");
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw std::invalid_argument("ChartConfig: lambda must lie in (0, 1], got " + std::to_string(lambda));
  if (!(h4 > 0.0) || !std::isfinite(h4))
    throw std::invalid_argument("ChartConfig: threshold h4 must be positive, got " + std::to_string(h4));
}

ShiftSpec::ShiftSpec(double delta) : delta_(delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("ShiftSpec: delta must be nonnegative");
}

ShiftSpec ShiftSpec::from_distance(double sqrt_delta) {
  if (!(sqrt_delta >= 0.0)) throw std::invalid_argument("ShiftSpec: shift distance must be nonnegative");
  return ShiftSpec(sqrt_delta * sqrt_delta);
}

}  // namespace mewma
