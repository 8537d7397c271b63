#pragma once

// Threshold calibration for a target in-control ARL and smoothing-constant
// optimization for a chosen out-of-control criterion.

#include "mewma/chart.hpp"
#include "mewma/incontrol.hpp"

#include <string>
#include <vector>

namespace mewma {

enum class Criterion { zero_state, conditional_steady, cyclical_steady, worst_case };

Criterion parse_criterion(const std::string& name);
std::string to_string(Criterion c);

struct CalibrationTarget {
  double target_arl = 200.0;  // desired E_inf(N), > 1
  Criterion criterion = Criterion::zero_state;
  double tolerance = 1e-6;    // relative
};

/// h4 with L(0; h4) = target_arl for the in-control zero-state ARL.
/// Requires target.criterion == zero_state.
double calibrate_h4(int p, double lambda, const CalibrationTarget& target, int r = kDefaultNodes);

/// Hotelling T^2 threshold: the (1 - 1/target_arl) quantile of chi2(p),
/// found by root-finding on the distribution function.
double calibrate_hotelling_h4(int p, double target_arl);

/// Out-of-control ARL of the given kind for a fully specified chart.
double criterion_arl(const ChartConfig& cfg, const ShiftSpec& shift, Criterion criterion,
                     int r = kDefaultNodes);

struct LambdaOptimum {
  double lambda = 0.0;
  double arl = 0.0;
  double h4 = 0.0;
  bool boundary = false;  // optimum at an end of the search range
  bool nonconvex = false; // golden-section probes failed to bracket a minimum
  int evaluations = 0;
};

/// Minimizes the criterion ARL over lambda in [lambda_lo, lambda_hi] by
/// golden-section search (tolerance 1e-4 on lambda), recalibrating h4 to
/// target.target_arl at every probe.
LambdaOptimum optimal_lambda(int p, double delta, const CalibrationTarget& target, int r = kDefaultNodes,
                             double lambda_lo = 0.005, double lambda_hi = 1.0);

struct ProfilePoint {
  double lambda = 0.0;
  double h4 = 0.0;
  double arl = 0.0;
};

/// Criterion ARL on a list of smoothing constants, each with its own
/// calibrated threshold.
std::vector<ProfilePoint> lambda_profile(int p, double delta, const CalibrationTarget& target,
                                         const std::vector<double>& lambdas, int r = kDefaultNodes);

}  // namespace mewma
