#pragma once

#include <cstddef>
#include <vector>

namespace mewma {

/// Nodes and weights of an N-point Gauss-Legendre rule on [a, b].
/// Nodes are strictly increasing and lie inside (a, b).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = 0.0;
  double b = 0.0;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Gauss-Legendre rule with n nodes on [a, b].  Nodes come from Newton's
/// method on P_n started at Chebyshev points, then are mapped affinely.
QuadratureRule gauss_legendre(int n, double a, double b);

/// Gauss-Legendre rule pulled through the Kosloff-Tal-Ezer map
/// t -> asin(beta t) / asin(beta), beta in [0, 1).  Larger beta spreads the
/// nodes more evenly, which resolves sharply peaked smooth integrands in the
/// middle of the interval with fewer nodes; beta = 0 is plain Gauss-Legendre.
QuadratureRule mapped_gauss_legendre(int n, double a, double b, double beta);

/// Gauss-Jacobi rule on [-1, 1] for the symmetric weight (1 - x^2)^e, e > -1:
/// sum_i w_i f(x_i) approximates the integral of (1 - x^2)^e f(x).  Built by
/// the Golub-Welsch eigenvalue method.
QuadratureRule gauss_jacobi_symmetric(int n, double e);

}  // namespace mewma
