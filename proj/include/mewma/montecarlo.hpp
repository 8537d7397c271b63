#pragma once

// Run-length simulation of the MEWMA chart.
//
// By rotational symmetry only two quantities are simulated: the component
// a of Z along the shift direction and b, the squared norm of the part of Z
// orthogonal to it.  One step draws a standard normal for a and a scaled
// noncentral chi2(p - 1) for b.  The chart signals when a^2 + b > h.

#include "mewma/chart.hpp"

#include <cstdint>
#include <string>

namespace mewma {

enum class SimulationMode { zero_state, conditional, cyclical };

SimulationMode parse_simulation_mode(const std::string& name);

inline constexpr int kDefaultChangePoint = 500;
inline constexpr int kMinSteadyStateChangePoint = 100;

struct SimulationPlan {
  ChartConfig cfg{2, 0.1, 8.64};
  double delta = 0.0;
  std::int64_t replications = 1'000'000;
  std::uint64_t seed = 1;
  int tau = kDefaultChangePoint;  // change point, ignored in zero_state mode
  SimulationMode mode = SimulationMode::zero_state;
};

struct RunLengthSample {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_effective = 0;
  std::int64_t discarded = 0;   // conditional mode: runs that signalled before tau
  bool pre_asymptotic = false;  // steady-state mode with tau < kMinSteadyStateChangePoint
};

/// Mean delay N - tau + 1 (N in zero_state mode) with its standard error.
/// Replications are split into fixed blocks with their own generator
/// streams, so results do not depend on the thread count.
RunLengthSample simulate_arl(const SimulationPlan& plan);

struct HazardEstimate {
  double hazard = 0.0;  // P(N = n_probe | N >= n_probe)
  double std_error = 0.0;
  std::int64_t survivors = 0;
};

/// In-control alarm probability at step n_probe among runs still alive.
/// Requires plan.delta == 0; throws SolverError with fewer than 100
/// surviving runs or no alarm at n_probe.
HazardEstimate simulate_hazard(const SimulationPlan& plan, int n_probe);

}  // namespace mewma
