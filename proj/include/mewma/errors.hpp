#pragma once

#include <stdexcept>

namespace mewma {

/// A numerical procedure failed: singular system, no convergence, or an
/// unattainable calibration target.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mewma
