#include "mewma/montecarlo.hpp"

#include "mewma/errors.hpp"
#include "mewma/parallel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace mewma {

namespace {

constexpr std::int64_t kBlockSize = 4096;
constexpr std::int64_t kMinSurvivors = 100;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class ReducedChart {
 public:
  ReducedChart(const ChartConfig& cfg, std::uint64_t stream)
      : lambda_(cfg.lambda()),
        keep_(1.0 - cfg.lambda()),
        h_(cfg.h()),
        orthogonal_dims_(cfg.p() - 1),
        rng_(splitmix64(stream)),
        extra_chi2_(cfg.p() > 2 ? 0.5 * (cfg.p() - 2) : 1.0, 2.0) {}

  void reset() { a_ = b_ = 0.0; }

  // One observation with mean sqrt_delta along the shift axis; true on alarm.
  bool step(double sqrt_delta) {
    a_ = keep_ * a_ + lambda_ * (sqrt_delta + normal_(rng_));
    if (orthogonal_dims_ > 0) {
      // |keep y + lambda e|^2 = lambda^2 chi2(p - 1, (keep |y| / lambda)^2).
      const double centre = keep_ * std::sqrt(b_) / lambda_ + normal_(rng_);
      double x = centre * centre;
      if (orthogonal_dims_ > 1) x += extra_chi2_(rng_);
      b_ = lambda_ * lambda_ * x;
    }
    return a_ * a_ + b_ > h_;
  }

 private:
  double lambda_, keep_, h_;
  int orthogonal_dims_;
  double a_ = 0.0, b_ = 0.0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::gamma_distribution<double> extra_chi2_;
};

struct Tally {
  std::int64_t count = 0;
  std::int64_t discarded = 0;
  std::uint64_t sum = 0;
  long double sum_sq = 0.0L;

  void add(std::int64_t n) {
    ++count;
    sum += static_cast<std::uint64_t>(n);
    sum_sq += static_cast<long double>(n) * static_cast<long double>(n);
  }
  void merge(const Tally& o) {
    count += o.count;
    discarded += o.discarded;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
};

// Delay of one replication, or -1 when the run is discarded.
std::int64_t one_run(ReducedChart& chart, const SimulationPlan& plan, double sqrt_delta) {
  chart.reset();
  if (plan.mode == SimulationMode::zero_state) {
    for (std::int64_t n = 1;; ++n)
      if (chart.step(sqrt_delta)) return n;
  }
  for (int t = 1; t < plan.tau; ++t) {
    if (chart.step(0.0)) {
      if (plan.mode == SimulationMode::conditional) return -1;
      chart.reset();
    }
  }
  for (std::int64_t n = 1;; ++n)
    if (chart.step(sqrt_delta)) return n;
}

void validate(const SimulationPlan& plan) {
  if (plan.replications < 1) throw std::invalid_argument("simulation: replications must be >= 1");
  if (plan.tau < 1) throw std::invalid_argument("simulation: tau must be >= 1");
  if (!(plan.delta >= 0.0) || !std::isfinite(plan.delta))
    throw std::invalid_argument("simulation: delta must be a finite nonnegative number");
}

template <class BlockFn>
Tally run_blocks(const SimulationPlan& plan, BlockFn&& block) {
  const std::int64_t blocks = (plan.replications + kBlockSize - 1) / kBlockSize;
  std::vector<Tally> partial(static_cast<std::size_t>(blocks));
  parallel_for(partial.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto first = static_cast<std::int64_t>(k) * kBlockSize;
      const auto n = std::min(kBlockSize, plan.replications - first);
      ReducedChart chart(plan.cfg, plan.seed ^ splitmix64(static_cast<std::uint64_t>(k)));
      block(chart, n, partial[k]);
    }
  });
  Tally total;
  for (const auto& t : partial) total.merge(t);
  return total;
}

}  // namespace

SimulationMode parse_simulation_mode(const std::string& name) {
  if (name == "zero" || name == "zero_state") return SimulationMode::zero_state;
  if (name == "cond" || name == "conditional") return SimulationMode::conditional;
  if (name == "cyc" || name == "cyclical") return SimulationMode::cyclical;
  throw std::invalid_argument("unknown simulation mode '" + name + "'");
}

RunLengthSample simulate_arl(const SimulationPlan& plan) {
  validate(plan);
  const double sqrt_delta = std::sqrt(plan.delta);
  const Tally total = run_blocks(plan, [&](ReducedChart& chart, std::int64_t n, Tally& tally) {
    for (std::int64_t i = 0; i < n; ++i) {
      const auto delay = one_run(chart, plan, sqrt_delta);
      if (delay < 0)
        ++tally.discarded;
      else
        tally.add(delay);
    }
  });
  RunLengthSample out;
  out.n_effective = total.count;
  out.discarded = total.discarded;
  out.pre_asymptotic = plan.mode != SimulationMode::zero_state && plan.tau < kMinSteadyStateChangePoint;
  if (total.count == 0) throw SolverError("simulate_arl: every run signalled before the change point");
  const long double n = total.count;
  const long double mean = static_cast<long double>(total.sum) / n;
  out.mean = static_cast<double>(mean);
  if (total.count > 1) {
    const long double var = (total.sum_sq - n * mean * mean) / (n - 1.0L);
    out.std_error = static_cast<double>(std::sqrt(std::max(0.0L, var) / n));
  }
  return out;
}

HazardEstimate simulate_hazard(const SimulationPlan& plan, int n_probe) {
  validate(plan);
  if (plan.delta != 0.0) throw std::invalid_argument("simulate_hazard: plan must be in control (delta = 0)");
  if (n_probe < 1) throw std::invalid_argument("simulate_hazard: n_probe must be >= 1");
  // count = runs alive at n_probe, sum = alarms exactly at n_probe.
  const Tally total = run_blocks(plan, [&](ReducedChart& chart, std::int64_t n, Tally& tally) {
    for (std::int64_t i = 0; i < n; ++i) {
      chart.reset();
      int t = 1;
      while (t < n_probe && !chart.step(0.0)) ++t;
      if (t < n_probe) continue;
      ++tally.count;
      if (chart.step(0.0)) ++tally.sum;
    }
  });
  if (total.count < kMinSurvivors)
    throw SolverError("simulate_hazard: too few runs survive to n_probe (" + std::to_string(total.count) + ")");
  if (total.sum == 0) throw SolverError("simulate_hazard: no alarm observed at n_probe");
  HazardEstimate out;
  out.survivors = total.count;
  out.hazard = static_cast<double>(total.sum) / static_cast<double>(total.count);
  out.std_error = std::sqrt(out.hazard * (1.0 - out.hazard) / static_cast<double>(total.count));
  return out;
}

}  // namespace mewma
