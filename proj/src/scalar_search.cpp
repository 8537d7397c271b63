#include "mewma/scalar_search.hpp"

#include "mewma/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace mewma {

ScalarOptimum golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                      double tol, int max_iterations) {
  if (!(a < b)) throw std::invalid_argument("golden_section_minimize: need a < b");
  const double c = (std::sqrt(5.0) - 1.0) / 2.0;
  const double lo = a;
  const double hi = b;
  ScalarOptimum out;
  const double fa = f(a);
  const double fb = f(b);
  double u = b - c * (b - a);
  double v = a + c * (b - a);
  double fu = f(u);
  double fv = f(v);
  out.evaluations = 4;
  out.bracket_failed = !(std::min(fu, fv) <= std::min(fa, fb));
  for (int it = 0; it < max_iterations && (b - a) > tol; ++it) {
    if (fu <= fv) {
      b = v;
      v = u;
      fv = fu;
      u = b - c * (b - a);
      fu = f(u);
    } else {
      a = u;
      u = v;
      fu = fv;
      v = a + c * (b - a);
      fv = f(v);
    }
    ++out.evaluations;
  }
  if (fu <= fv) {
    out.x = u;
    out.fx = fu;
  } else {
    out.x = v;
    out.fx = fv;
  }
  if (fa < out.fx) {
    out.x = lo;
    out.fx = fa;
  }
  if (fb < out.fx) {
    out.x = hi;
    out.fx = fb;
  }
  out.boundary = (out.x - lo) <= 2.0 * tol || (hi - out.x) <= 2.0 * tol;
  return out;
}

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                      double tol, int max_iterations) {
  auto out = golden_section_minimize([&](double x) { return -f(x); }, a, b, tol, max_iterations);
  out.fx = -out.fx;
  return out;
}

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi, double xtol,
                           double ftol, int max_iterations) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw SolverError("find_root_bracketed: root is not bracketed");
  int side = 0;
  for (int it = 0; it < max_iterations; ++it) {
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    // Fall back to bisection when the secant step leaves the bracket or
    // crowds one end.
    const double width = hi - lo;
    if (!(x > lo + 0.01 * width && x < hi - 0.01 * width)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::abs(fx) <= ftol || width <= xtol) return x;
    if ((fx > 0.0) == (fhi > 0.0)) {
      hi = x;
      fhi = fx;
      if (side == -1) flo *= 0.5;
      side = -1;
    } else {
      lo = x;
      flo = fx;
      if (side == 1) fhi *= 0.5;
      side = 1;
    }
  }
  throw SolverError("find_root_bracketed: no convergence");
}

}  // namespace mewma
