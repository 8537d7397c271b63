#include "mewma/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mewma {

namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr double kNewtonTolerance = 1e-15;

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  if (n == 0) return {1.0, 0.0};
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: node count must be >= 1");
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("gauss_legendre: interval must satisfy a < b");

  std::vector<double> t(n), w(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-type guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
      const auto [pn, d] = legendre(n, x);
      dp = d;
      const double step = pn / d;
      x -= step;
      if (std::abs(step) <= kNewtonTolerance) break;
    }
    dp = legendre(n, x).second;
    const double wi = 2.0 / ((1.0 - x * x) * dp * dp);
    t[i] = -x;
    t[n - 1 - i] = x;
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) t[n / 2] = 0.0;

  QuadratureRule rule;
  rule.a = a;
  rule.b = b;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half_len = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half_len * t[i];
    rule.weights[i] = half_len * w[i];
  }
  return rule;
}

QuadratureRule mapped_gauss_legendre(int n, double a, double b, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("mapped_gauss_legendre: beta must lie in [0, 1)");
  if (beta == 0.0) return gauss_legendre(n, a, b);
  QuadratureRule rule = gauss_legendre(n, -1.0, 1.0);
  const double scale = std::asin(beta);
  const double mid = 0.5 * (a + b);
  const double half_len = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    const double t = rule.nodes[i];
    rule.nodes[i] = mid + half_len * std::asin(beta * t) / scale;
    rule.weights[i] *= half_len * beta / (scale * std::sqrt(1.0 - beta * beta * t * t));
  }
  rule.a = a;
  rule.b = b;
  return rule;
}

QuadratureRule gauss_jacobi_symmetric(int n, double e) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi_symmetric: node count must be >= 1");
  if (!(e > -1.0)) throw std::invalid_argument("gauss_jacobi_symmetric: exponent must exceed -1");
  // Orthonormal recurrence: zero diagonal, off-diagonal
  // b_k^2 = k (k + 2e) / ((2k + 2e + 1)(2k + 2e - 1)); for e = -1/2 the k = 1
  // term is the limit 1/2.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + 2.0 * e;
    const double b2 = (s - 1.0 == 0.0) ? 0.5 : k * (k + 2.0 * e) / ((s + 1.0) * (s - 1.0));
    jac(k, k - 1) = jac(k - 1, k) = std::sqrt(b2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi_symmetric: eigensolver failed");
  const double mu0 = std::exp(std::lgamma(0.5) + std::lgamma(e + 1.0) - std::lgamma(e + 1.5));
  QuadratureRule rule;
  rule.a = -1.0;
  rule.b = 1.0;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v * v;
  }
  // Exact symmetry and zero centre node.
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace mewma
