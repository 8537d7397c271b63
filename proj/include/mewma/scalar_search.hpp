#pragma once

#include <functional>

namespace mewma {

struct ScalarOptimum {
  double x = 0.0;
  double fx = 0.0;
  /// The optimum sits at (or within tolerance of) an end of the search
  /// interval, so the true optimum may lie outside it.
  bool boundary = false;
  /// The interior probes never bracketed an extremum: the first two golden
  /// points did not improve on both end points.
  bool bracket_failed = false;
  int evaluations = 0;
};

/// Golden-section minimization of f on [a, b] until the bracket is shorter
/// than tol.  The end points are evaluated too, so a monotone f returns the
/// better end point with boundary set.
ScalarOptimum golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                      double tol, int max_iterations = 500);

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                      double tol, int max_iterations = 500);

/// Root of f on [lo, hi] where f(lo) and f(hi) have opposite signs, by the
/// Illinois variant of regula falsi with bisection safeguards.  Stops when
/// |f| <= ftol or the bracket is shorter than xtol.
double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi, double xtol,
                           double ftol, int max_iterations = 200);

}  // namespace mewma
