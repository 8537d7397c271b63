#pragma once

#include <cmath>

// Special functions used by the MEWMA run-length integral equations.
//
// Densities are returned on the log scale so that kernels with large
// noncentralities (small smoothing constants) never overflow or underflow
// before they are combined.  A log-density of -infinity encodes a density of
// exactly zero.

namespace mewma::specfun {

/// Natural log of the central chi-square density with p degrees of freedom.
/// At x = 0 the result is -inf for p > 2, log(1/2) for p = 2 and +inf for p = 1.
double log_chi2_pdf(double x, int p);

/// Natural log of the noncentral chi-square density.
///
/// Evaluated as a Poisson mixture of central densities.  Summation starts
/// at the largest mixture term and walks outwards in both directions until
/// the terms drop below 1e-17 of the running sum, using the term ratio
/// recurrence so only the modal term needs log-gamma calls.
double log_noncentral_chi2_pdf(double x, int p, double nc);

/// P(X <= x) for X ~ chi2(p, nc).
double noncentral_chi2_cdf(double x, int p, double nc);

/// P(X > x) for X ~ chi2(p, nc), computed directly so the upper tail keeps
/// full relative accuracy.
double noncentral_chi2_sf(double x, int p, double nc);

/// log 0F1(; b; z) for b > 0, z >= 0, summed in log space.
double log_hyp0f1(double b, double z);

/// Density of gamma = cos(angle) between a fixed direction and a uniformly
/// distributed direction on the unit sphere in R^p.
///
/// gamma = +-1 is accepted for p >= 3 (continuous limit); for p = 2 the density
/// diverges there and a domain error is raised.
double angle_density_gamma(double gamma, int p);

/// Density of the angle theta in [0, pi] between a fixed and a uniformly
/// distributed direction in R^p.
double angle_density_theta(double theta, int p);

/// log Beta(1/2, (p-1)/2), the normalizer shared by both angle densities.
double log_angle_normalizer(int p);

/// Density on the linear scale.
inline double noncentral_chi2_pdf(double x, int p, double nc) {
  return std::exp(log_noncentral_chi2_pdf(x, p, nc));
}

}  // namespace mewma::specfun
