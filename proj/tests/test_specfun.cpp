#include "mewma/specfun.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

using namespace mewma::specfun;

namespace {

// Poisson mixture summed from m = 0 far past the bulk, with std::lgamma and
// long double accumulation.
double brute_force_ncx2_pdf(double x, int p, double nc) {
  const long double a = 0.5L * nc;
  const long double b = 0.5L * x;
  const long double k = 0.5L * p;
  const long m_max = static_cast<long>(a + 60.0 * std::sqrt(a + 1.0) + 200.0);
  long double sum = 0.0L;
  for (long m = 0; m <= m_max; ++m) {
    const long double log_term = -a + m * std::log(a) - std::lgamma(m + 1.0L) + (k + m - 1.0L) * std::log(b) - b -
                                 std::log(2.0L) - std::lgamma(k + m);
    sum += std::exp(log_term);
  }
  return static_cast<double>(sum);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("central chi-square log density against closed forms") {
  // p = 2: exp(-x/2) / 2; p = 4: x exp(-x/2) / 4.
  for (double x : {1e-6, 0.3, 1.0, 7.5, 40.0}) {
    CHECK(log_chi2_pdf(x, 2) == doctest::Approx(-0.5 * x - std::log(2.0)).epsilon(1e-14));
    CHECK(log_chi2_pdf(x, 4) == doctest::Approx(std::log(x) - 0.5 * x - std::log(4.0)).epsilon(1e-14));
  }
  CHECK(log_chi2_pdf(0.0, 2) == doctest::Approx(-std::log(2.0)));
  CHECK(std::isinf(log_chi2_pdf(0.0, 1)));
  CHECK(log_chi2_pdf(0.0, 1) > 0);
  CHECK(std::isinf(log_chi2_pdf(0.0, 3)));
  CHECK(log_chi2_pdf(0.0, 3) < 0);
}

TEST_CASE("noncentral density matches a brute-force Poisson mixture") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dof(1, 60);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const int p = dof(rng);
    const double nc = 2000.0 * std::pow(unit(rng), 3.0);
    const double mean = p + nc;
    const double x = std::max(1e-3, mean + (unit(rng) - 0.5) * 6.0 * std::sqrt(2.0 * p + 4.0 * nc));
    const double expect = brute_force_ncx2_pdf(x, p, nc);
    if (expect < 1e-250) continue;
    worst = std::max(worst, rel_err(noncentral_chi2_pdf(x, p, nc), expect));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("noncentral density spec examples and limits") {
  // Venables form: 0.5 exp(-(x + nc)/2) I0(sqrt(nc x)) for p = 2.
  const double x = 3.0, nc = 2.0;
  CHECK(noncentral_chi2_pdf(x, 2, nc) ==
        doctest::Approx(0.5 * std::exp(-0.5 * (x + nc)) * std::cyl_bessel_i(0.0, std::sqrt(nc * x))).epsilon(1e-13));
  CHECK(log_noncentral_chi2_pdf(5.0, 4, 0.0) == doctest::Approx(log_chi2_pdf(5.0, 4)));
  CHECK(log_noncentral_chi2_pdf(0.0, 2, 3.0) == doctest::Approx(-std::log(2.0) - 1.5));
  // Large noncentrality stays finite where exp(-nc/2) alone underflows.
  const double big = log_noncentral_chi2_pdf(4000.0, 10, 4000.0);
  CHECK(std::isfinite(big));
  CHECK(big > -10.0);
  CHECK_THROWS_AS(log_noncentral_chi2_pdf(1.0, 2, -1.0), std::domain_error);
  CHECK_THROWS_AS(log_noncentral_chi2_pdf(-1.0, 2, 1.0), std::domain_error);
  CHECK_THROWS_AS(log_chi2_pdf(1.0, 0), std::domain_error);
}

TEST_CASE("noncentral density integrates to one") {
  // Simpson in t = sqrt(x), which removes the sqrt(x) behaviour at 0 for p = 3.
  for (int p : {2, 3, 5, 10, 50}) {
    for (double nc : {0.0, 0.5, 20.0, 300.0}) {
      const double sd = std::sqrt(2.0 * p + 4.0 * nc);
      const double lo = std::sqrt(std::max(0.0, p + nc - 40.0 * sd));
      const double hi = std::sqrt(p + nc + 40.0 * sd);
      const int n = 200000;
      const double step = (hi - lo) / n;
      double sum = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double t = lo + i * step;
        const double wt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += wt * 2.0 * t * noncentral_chi2_pdf(t * t, p, nc);
      }
      CHECK(sum * step / 3.0 == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("density is the derivative of the distribution function") {
  for (int p : {1, 2, 7}) {
    for (double nc : {0.0, 3.0, 80.0}) {
      for (double x : {0.5, 4.0, 60.0, 110.0}) {
        const double h = 1e-4 * x;
        const double deriv = (noncentral_chi2_cdf(x + h, p, nc) - noncentral_chi2_cdf(x - h, p, nc)) / (2.0 * h);
        const double pdf = noncentral_chi2_pdf(x, p, nc);
        if (pdf < 1e-200) continue;
        CHECK(deriv == doctest::Approx(pdf).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("distribution functions agree with boost and with each other") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const int p = 1 + static_cast<int>(unit(rng) * 30);
    const double nc = 100.0 * unit(rng);
    const double x = (p + nc) * 2.0 * unit(rng) + 1e-3;
    const double cdf = noncentral_chi2_cdf(x, p, nc);
    const double sf = noncentral_chi2_sf(x, p, nc);
    CHECK(cdf + sf == doctest::Approx(1.0).epsilon(1e-13));
    if (nc > 0.0) {
      boost::math::non_central_chi_squared dist(p, nc);
      CHECK(cdf == doctest::Approx(boost::math::cdf(dist, x)).epsilon(1e-9));
    }
  }
  // Upper tail keeps relative accuracy far out.
  const double tail = noncentral_chi2_sf(200.0, 2, 1.0);
  CHECK(tail > 0.0);
  CHECK(tail < 1e-35);
  CHECK(noncentral_chi2_sf(0.0, 3, 1.0) == 1.0);
  CHECK(noncentral_chi2_cdf(0.0, 3, 1.0) == 0.0);
}

TEST_CASE("log 0F1 against the Bessel representation") {
  // 0F1(;b;z) = Gamma(b) z^((1-b)/2) I_{b-1}(2 sqrt z).
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double b = 1.0 + 0.5 * static_cast<int>(unit(rng) * 20);
    const double z = 200.0 * unit(rng) * unit(rng) + 1e-8;
    const double expect = std::lgamma(b) + 0.5 * (1.0 - b) * std::log(z) +
                          std::log(std::cyl_bessel_i(b - 1.0, 2.0 * std::sqrt(z)));
    CHECK(log_hyp0f1(b, z) == doctest::Approx(expect).epsilon(1e-11).scale(1.0));
  }
  CHECK(log_hyp0f1(1.5, 0.0) == 0.0);
  CHECK_THROWS_AS(log_hyp0f1(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(log_hyp0f1(1.0, -1.0), std::domain_error);
}

TEST_CASE("mixture density equals the 0F1 closed form") {
  // f(x|p,nc) = exp(-(x+nc)/2) x^(p/2-1) / (2^(p/2) Gamma(p/2)) 0F1(;p/2; nc x / 4).
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const int p = 1 + static_cast<int>(unit(rng) * 40);
    const double nc = 500.0 * unit(rng) * unit(rng);
    const double x = 1e-3 + (p + nc) * 2.0 * unit(rng);
    const double k = 0.5 * p;
    const double expect = -0.5 * (x + nc) + (k - 1.0) * std::log(x) - k * std::log(2.0) - std::lgamma(k) +
                          log_hyp0f1(k, 0.25 * nc * x);
    CHECK(log_noncentral_chi2_pdf(x, p, nc) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("angle densities") {
  for (int p : {2, 3, 4, 10, 50}) {
    // Densities integrate to one; theta form by composite Simpson.
    const int n = 20000;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = std::numbers::pi * i / n;
      const double wt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += wt * angle_density_theta(t, p);
    }
    CHECK(s * std::numbers::pi / n / 3.0 == doctest::Approx(1.0).epsilon(1e-9));
    // Change of variables gamma = cos(theta).
    const double th = 1.1;
    CHECK(angle_density_theta(th, p) == doctest::Approx(angle_density_gamma(std::cos(th), p) * std::sin(th)));
  }
  CHECK(angle_density_gamma(0.3, 3) == 0.5);
  CHECK(angle_density_gamma(1.0, 3) == 0.5);
  CHECK(angle_density_gamma(-1.0, 5) == 0.0);
  CHECK(angle_density_gamma(0.0, 2) == doctest::Approx(std::numbers::inv_pi));
  CHECK_THROWS_AS(angle_density_gamma(1.0, 2), std::domain_error);
  CHECK_THROWS_AS(angle_density_gamma(1.5, 4), std::domain_error);
  CHECK_THROWS_AS(angle_density_theta(-0.1, 4), std::domain_error);
}

TEST_CASE("angle of a uniform direction follows the beta law") {
  // (1 + gamma) / 2 ~ Beta((p-1)/2, (p-1)/2); compare a simulated sample.
  for (int p : {2, 3, 4, 10}) {
    std::mt19937_64 rng(100 + p);
    std::normal_distribution<double> normal;
    const int n = 100000;
    std::vector<double> g(n);
    for (auto& gi : g) {
      double first = normal(rng), norm2 = first * first;
      for (int k = 1; k < p; ++k) {
        const double e = normal(rng);
        norm2 += e * e;
      }
      gi = 0.5 * (1.0 + first / std::sqrt(norm2));
    }
    std::sort(g.begin(), g.end());
    boost::math::beta_distribution<double> law(0.5 * (p - 1), 0.5 * (p - 1));
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
      const double f = boost::math::cdf(law, g[i]);
      ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
    }
    CHECK(ks < 0.01);
    // And the implemented density matches the beta density under the map.
    const double u = 0.37;
    CHECK(angle_density_gamma(2.0 * u - 1.0, p) * 2.0 == doctest::Approx(boost::math::pdf(law, u)).epsilon(1e-12));
  }
}

TEST_CASE("log angle normalizer is log Beta(1/2, (p-1)/2)") {
  for (int p : {2, 3, 7, 50})
    CHECK(log_angle_normalizer(p) == doctest::Approx(std::log(std::beta(0.5, 0.5 * (p - 1)))).epsilon(1e-13));
  CHECK_THROWS_AS(log_angle_normalizer(1), std::domain_error);
}
