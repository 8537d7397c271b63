#pragma once

// In-control (no shift) integral equations on the radial axis.
//
// All solvers work on z with alpha = z^2, z in [0, sqrt(h)], so the
// quadrature measure for alpha is W = diag(2 w_i z_i).

#include "mewma/chart.hpp"
#include "mewma/quadrature.hpp"

#include <Eigen/Dense>

namespace mewma {

inline constexpr int kDefaultNodes = 30;
inline constexpr int kRefineNodes = 200;

/// Map parameter of the radial rule (see mapped_gauss_legendre).
inline constexpr double kRadialMap = 0.95;

enum class SolutionKind { arl, eigenfunction, stationary };

/// Values of a one-dimensional Nystrom solution at the quadrature nodes,
/// together with everything needed to evaluate its natural interpolant.
struct NystromSolution1D {
  ChartConfig cfg;
  QuadratureRule rule;
  Eigen::VectorXd values;
  SolutionKind kind = SolutionKind::arl;
  double rho = 1.0;        // dominant eigenvalue (eigenfunction kind)
  double psi0_atom = 0.0;  // restart atom (stationary kind)

  /// Nystrom interpolant at alpha in [0, h]: ARL for kind arl, density in u
  /// otherwise.
  double operator()(double alpha) const;

  /// ARL kind only: one more application of the integral operator to the
  /// interpolant, integrated with a fine Gauss-Legendre rule.  Resolves the
  /// narrow kernel row at small alpha that the solution grid may not.
  double refined(double alpha, int fine_nodes = kRefineNodes) const;

  /// Diagonal of W, 2 w_i z_i.
  Eigen::VectorXd mass_weights() const;

  /// (W v)' 1, the area under a density solution.
  double mass() const;
};

/// One-step transition density of alpha = Z'Z: (1/lambda^2) f(u/lambda^2 | p, eta alpha).
double incontrol_kernel(const ChartConfig& cfg, double u, double alpha);

/// Mapped Gauss-Legendre rule on [0, sqrt(h)].
QuadratureRule radial_rule(const ChartConfig& cfg, int r);

/// q_ij = w_j (1/lambda^2) f(z_j^2/lambda^2 | p, eta z_i^2) 2 z_j.
Eigen::MatrixXd build_kernel_L(const ChartConfig& cfg, const QuadratureRule& rule);

/// q_ij = w_j (1/lambda^2) f(z_i^2/lambda^2 | p, eta z_j^2) 2 z_j.
Eigen::MatrixXd build_kernel_psi(const ChartConfig& cfg, const QuadratureRule& rule);

/// Zero-state in-control ARL function; value at alpha = 0 is E_inf(N).
NystromSolution1D zero_state_arl_incontrol(const ChartConfig& cfg, int r = kDefaultNodes);

/// Quasi-stationary density (dominant left eigenfunction) by power
/// iteration, normalized to unit area.
NystromSolution1D quasi_stationary(const ChartConfig& cfg, int r = kDefaultNodes);

/// Same eigenpair from a dense eigendecomposition; kept as a cross-check.
NystromSolution1D quasi_stationary_dense(const ChartConfig& cfg, int r = kDefaultNodes);

/// Stationary density of the chart restarted at zero after each alarm.
/// Its area plus the restart atom Psi0 = 1 / L(0) equals one.
NystromSolution1D cyclical_stationary(const ChartConfig& cfg, int r = kDefaultNodes);

/// The three in-control solutions on a shared rule.
struct InControlAnalysis {
  NystromSolution1D arl;
  NystromSolution1D psi;
  NystromSolution1D psi_star;
};

InControlAnalysis analyze_incontrol(const ChartConfig& cfg, int r = kDefaultNodes);

struct InControlSteadyState {
  double D = 0.0;      // conditional steady-state ARL
  double Dstar = 0.0;  // cyclical steady-state ARL
  double L0 = 0.0;     // zero-state ARL (refined)
  double psi0 = 0.0;
  double rho = 0.0;
};

InControlSteadyState steady_state_arl_incontrol(const ChartConfig& cfg, int r = kDefaultNodes);
InControlSteadyState steady_state_arl_incontrol(const InControlAnalysis& analysis);

}  // namespace mewma
