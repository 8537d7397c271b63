#include "mewma/calibrate.hpp"

#include "mewma/errors.hpp"
#include "mewma/outofcontrol.hpp"
#include "mewma/scalar_search.hpp"
#include "mewma/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace mewma {

namespace {

constexpr double kLambdaTolerance = 1e-4;
constexpr int kMaxBracketSteps = 80;
constexpr double kBracketFactor = 1.25;

void check_target(const CalibrationTarget& t) {
  if (!(t.target_arl > 1.0)) throw std::invalid_argument("calibration target ARL must exceed 1");
  if (!(t.tolerance > 0.0)) throw std::invalid_argument("calibration tolerance must be positive");
}

// Brackets the root of the increasing function g and refines it.
double increasing_root(const std::function<double(double)>& g, double start, double ftol) {
  double lo = start;
  double hi = start;
  double glo = g(lo);
  double ghi = glo;
  int steps = 0;
  while (ghi < 0.0) {
    if (++steps > kMaxBracketSteps) throw SolverError("calibration: target unattainable (no upper bracket)");
    lo = hi;
    glo = ghi;
    hi *= kBracketFactor;
    const double next = g(hi);
    if (!(next > ghi)) throw SolverError("calibration: ARL is not increasing in the threshold");
    ghi = next;
  }
  while (glo > 0.0) {
    if (++steps > kMaxBracketSteps) throw SolverError("calibration: target unattainable (no lower bracket)");
    hi = lo;
    ghi = glo;
    lo /= kBracketFactor;
    const double next = g(lo);
    if (!(next < glo)) throw SolverError("calibration: ARL is not increasing in the threshold");
    glo = next;
  }
  const double root = find_root_bracketed(g, lo, hi, 1e-13 * hi, ftol);
  // A bracket closed against an unsolvable threshold shrinks onto the
  // failure edge instead of a root.
  if (!(std::abs(g(root)) <= std::max(10.0 * ftol, 1e-9))) throw SolverError("calibration: target unattainable");
  return root;
}

}  // namespace

Criterion parse_criterion(const std::string& name) {
  if (name == "zero" || name == "zero_state") return Criterion::zero_state;
  if (name == "cond" || name == "conditional" || name == "conditional_steady") return Criterion::conditional_steady;
  if (name == "cyc" || name == "cyclical" || name == "cyclical_steady") return Criterion::cyclical_steady;
  if (name == "worst" || name == "worst_case") return Criterion::worst_case;
  throw std::invalid_argument("unknown criterion '" + name + "'");
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::zero_state: return "zero";
    case Criterion::conditional_steady: return "cond";
    case Criterion::cyclical_steady: return "cyc";
    case Criterion::worst_case: return "worst";
  }
  return "?";
}

double calibrate_h4(int p, double lambda, const CalibrationTarget& target, int r) {
  check_target(target);
  if (target.criterion != Criterion::zero_state)
    throw std::invalid_argument("calibrate_h4: thresholds are calibrated on the zero-state in-control ARL");
  const double log_target = std::log(target.target_arl);
  auto g = [&](double h4) {
    try {
      return std::log(zero_state_arl_incontrol(ChartConfig(p, lambda, h4), r).refined(0.0)) - log_target;
    } catch (const SolverError&) {
      // An ill-conditioned system means the threshold is far beyond any
      // attainable target; report it as "too large".
      return std::numeric_limits<double>::infinity();
    }
  };
  // |log ratio| <= tol / 2 keeps the relative ARL error within tol.
  return increasing_root(g, static_cast<double>(p), 0.5 * target.tolerance);
}

double calibrate_hotelling_h4(int p, double target_arl) {
  if (!(target_arl > 1.0)) throw std::invalid_argument("calibrate_hotelling_h4: target ARL must exceed 1");
  const double log_alpha = -std::log(target_arl);
  // -log P(chi2 > x) increases in x.
  auto g = [&](double x) { return -std::log(specfun::noncentral_chi2_sf(x, p, 0.0)) + log_alpha; };
  return increasing_root(g, static_cast<double>(p), 1e-14);
}

double criterion_arl(const ChartConfig& cfg, const ShiftSpec& shift, Criterion criterion, int r) {
  const auto surface = solve_arl_surface(cfg, shift, r);
  switch (criterion) {
    case Criterion::zero_state:
      return surface(0.0, 0.0);
    case Criterion::worst_case:
      return worst_case_arl(surface).W;
    case Criterion::conditional_steady:
    case Criterion::cyclical_steady: {
      const auto ic = analyze_incontrol(cfg, r);
      const Eigen::VectorXd g = surface.angle_averaged();
      const Eigen::VectorXd m = ic.psi.mass_weights();
      if (criterion == Criterion::conditional_steady) {
        const Eigen::VectorXd wpsi = m.cwiseProduct(ic.psi.values);
        return wpsi.dot(g) / wpsi.sum();
      }
      return m.cwiseProduct(ic.psi_star.values).dot(g) + ic.psi_star.psi0_atom * surface(0.0, 0.0);
    }
  }
  throw std::logic_error("criterion_arl: unhandled criterion");
}

LambdaOptimum optimal_lambda(int p, double delta, const CalibrationTarget& target, int r, double lambda_lo,
                             double lambda_hi) {
  check_target(target);
  if (!(delta > 0.0)) throw std::invalid_argument("optimal_lambda: shift must be positive");
  if (!(lambda_lo >= 0.005 && lambda_hi <= 1.0 && lambda_lo < lambda_hi))
    throw std::invalid_argument("optimal_lambda: lambda range must lie within [0.005, 1]");
  const CalibrationTarget incontrol{target.target_arl, Criterion::zero_state, target.tolerance};
  const ShiftSpec shift(delta);
  std::map<long long, double> h4_cache;
  auto h4_for = [&](double lambda) {
    const auto key = std::llround(lambda * 1e6);
    auto it = h4_cache.find(key);
    if (it != h4_cache.end()) return it->second;
    const double h4 = calibrate_h4(p, lambda, incontrol, r);
    h4_cache.emplace(key, h4);
    return h4;
  };
  auto f = [&](double lambda) {
    return criterion_arl(ChartConfig(p, lambda, h4_for(lambda)), shift, target.criterion, r);
  };
  const auto best = golden_section_minimize(f, lambda_lo, lambda_hi, kLambdaTolerance);
  LambdaOptimum out;
  out.lambda = best.x;
  out.arl = best.fx;
  out.h4 = h4_for(best.x);
  out.boundary = best.boundary;
  out.nonconvex = best.bracket_failed;
  out.evaluations = best.evaluations;
  return out;
}

std::vector<ProfilePoint> lambda_profile(int p, double delta, const CalibrationTarget& target,
                                         const std::vector<double>& lambdas, int r) {
  check_target(target);
  const CalibrationTarget incontrol{target.target_arl, Criterion::zero_state, target.tolerance};
  std::vector<ProfilePoint> out;
  for (double lambda : lambdas) {
    const double h4 = calibrate_h4(p, lambda, incontrol, r);
    out.push_back({lambda, h4, criterion_arl(ChartConfig(p, lambda, h4), ShiftSpec(delta), target.criterion, r)});
  }
  return out;
}

}  // namespace mewma
