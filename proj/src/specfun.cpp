#include "mewma/specfun.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mewma::specfun {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStopRatio = 1e-17;

double lgam(double x) { return boost::math::lgamma(x); }

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

// Largest m >= 0 with (m + 1)(m + shift) <= product, i.e. the index of the
// biggest term of a series whose term ratio is product / ((m + 1)(m + shift)).
double modal_index(double product, double shift) {
  const double b = shift + 1.0;
  const double disc = b * b - 4.0 * (shift - product);
  if (disc <= 0.0) return 0.0;
  return std::max(0.0, std::floor((-b + std::sqrt(disc)) / 2.0));
}

// Sum of a unimodal positive series relative to its modal term.  Terms obey
// t[m+1] / t[m] = product / ((m + 1)(m + shift)).
double relative_series_sum(double mode, double product, double shift) {
  double sum = 1.0;
  double term = 1.0;
  for (double m = mode;; m += 1.0) {
    term *= product / ((m + 1.0) * (m + shift));
    sum += term;
    if (term < kStopRatio * sum) break;
  }
  term = 1.0;
  for (double m = mode; m > 0.0; m -= 1.0) {
    term *= m * (m - 1.0 + shift) / product;
    sum += term;
    if (term < kStopRatio * sum) break;
  }
  return sum;
}

}  // namespace

double log_chi2_pdf(double x, int p) {
  require(p >= 1, "log_chi2_pdf: degrees of freedom must be >= 1");
  require(x >= 0.0 && !std::isnan(x), "log_chi2_pdf: x must be nonnegative");
  if (std::isinf(x)) return -kInf;
  const double k = 0.5 * p;
  if (x == 0.0) {
    if (p == 1) return kInf;
    if (p == 2) return -std::numbers::ln2;
    return -kInf;
  }
  return (k - 1.0) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - lgam(k);
}

double log_noncentral_chi2_pdf(double x, int p, double nc) {
  require(nc >= 0.0 && std::isfinite(nc), "log_noncentral_chi2_pdf: noncentrality must be nonnegative");
  if (nc == 0.0) return log_chi2_pdf(x, p);
  const double central = log_chi2_pdf(x, p);
  if (x == 0.0 || std::isinf(central)) return central - 0.5 * nc;

  // Poisson(nc/2) mixture of chi2(p + 2m): term m is
  //   e^{-a} a^m / m! * b^{k+m-1} e^{-b} / (2 Gamma(k+m)),  a = nc/2, b = x/2.
  const double a = 0.5 * nc;
  const double b = 0.5 * x;
  const double k = 0.5 * p;
  const double product = a * b;
  const double mode = modal_index(product, k);
  const double log_mode_term = -a + mode * std::log(a) - lgam(mode + 1.0) +
                               (k + mode - 1.0) * std::log(b) - b - std::numbers::ln2 -
                               lgam(k + mode);
  return log_mode_term + std::log(relative_series_sum(mode, product, k));
}

namespace {

template <class RegularizedGamma>
double poisson_mixture_probability(double x, int p, double nc, RegularizedGamma&& reg) {
  const double k = 0.5 * p;
  const double b = 0.5 * x;
  if (nc == 0.0) return reg(k, b);
  const double a = 0.5 * nc;
  const double mode = std::floor(a);
  const double log_w0 = -a + mode * std::log(a) - lgam(mode + 1.0);
  const double w0 = std::exp(log_w0);
  double sum = w0 * reg(k + mode, b);
  double w = w0;
  for (double m = mode + 1.0;; m += 1.0) {
    w *= a / m;
    sum += w * reg(k + m, b);
    if (w < kStopRatio) break;
  }
  w = w0;
  for (double m = mode; m > 0.0; m -= 1.0) {
    w *= m / a;
    sum += w * reg(k + m - 1.0, b);
    if (w < kStopRatio) break;
  }
  return std::min(1.0, sum);
}

void check_cdf_args(double x, int p, double nc) {
  require(p >= 1, "noncentral_chi2_cdf: degrees of freedom must be >= 1");
  require(x >= 0.0 && !std::isnan(x), "noncentral_chi2_cdf: x must be nonnegative");
  require(nc >= 0.0 && std::isfinite(nc), "noncentral_chi2_cdf: noncentrality must be nonnegative");
}

}  // namespace

double noncentral_chi2_cdf(double x, int p, double nc) {
  check_cdf_args(x, p, nc);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return poisson_mixture_probability(
      x, p, nc, [](double s, double t) { return boost::math::gamma_p(s, t); });
}

double noncentral_chi2_sf(double x, int p, double nc) {
  check_cdf_args(x, p, nc);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return poisson_mixture_probability(
      x, p, nc, [](double s, double t) { return boost::math::gamma_q(s, t); });
}

double log_hyp0f1(double b, double z) {
  require(b > 0.0, "log_hyp0f1: b must be positive");
  require(z >= 0.0 && std::isfinite(z), "log_hyp0f1: z must be nonnegative");
  if (z == 0.0) return 0.0;
  // t[n] = z^n / ((b)_n n!), t[n+1] / t[n] = z / ((n + 1)(n + b)).
  const double mode = modal_index(z, b);
  const double log_mode_term = mode * std::log(z) - (lgam(b + mode) - lgam(b)) - lgam(mode + 1.0);
  return log_mode_term + std::log(relative_series_sum(mode, z, b));
}

double log_angle_normalizer(int p) {
  require(p >= 2, "angle density: dimension must be >= 2");
  return lgam(0.5) + lgam(0.5 * (p - 1)) - lgam(0.5 * p);
}

double angle_density_gamma(double gamma, int p) {
  require(p >= 2, "angle_density_gamma: dimension must be >= 2");
  require(std::abs(gamma) <= 1.0, "angle_density_gamma: |gamma| must not exceed 1");
  if (std::abs(gamma) == 1.0) {
    require(p != 2, "angle_density_gamma: density diverges at |gamma| = 1 for p = 2");
    return p == 3 ? 0.5 : 0.0;
  }
  if (p == 3) return 0.5;
  const double one_minus_sq = (1.0 - gamma) * (1.0 + gamma);
  return std::exp(0.5 * (p - 3) * std::log(one_minus_sq) - log_angle_normalizer(p));
}

double angle_density_theta(double theta, int p) {
  require(p >= 2, "angle_density_theta: dimension must be >= 2");
  require(theta >= 0.0 && theta <= std::numbers::pi, "angle_density_theta: theta must lie in [0, pi]");
  if (p == 2) return std::numbers::inv_pi;
  const double s = std::sin(theta);
  if (s <= 0.0) return 0.0;
  return std::exp((p - 2) * std::log(s) - log_angle_normalizer(p));
}

}  // namespace mewma::specfun
