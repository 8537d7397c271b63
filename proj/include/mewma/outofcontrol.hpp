#pragma once

// Out-of-control ARL on the (radius, angle) plane and the steady-state,
// worst-case and detection-delay measures built from it.
//
// The chart state is described by alpha = Z'Z and gamma, the cosine of the
// angle between Z and the shift direction mu1; gamma = -1 points away from
// the shift.  The surface is solved on alpha = z^2, z in [0, sqrt(h)].
//
// Along the angle the kernel carries the factor (1 - gamma^2)^((p-3)/2) of
// the uniform direction law.  The default jacobi axis puts that factor into
// the quadrature weight; sine (gamma = sin t) and direct (plain
// Gauss-Legendre in gamma) are kept for comparison.

#include "mewma/chart.hpp"
#include "mewma/incontrol.hpp"
#include "mewma/quadrature.hpp"

#include <Eigen/Dense>

#include <vector>

namespace mewma {

enum class AngleAxis { jacobi, sine, direct };

AngleAxis default_angle_axis(int p);

/// Angle nodes as cosines gamma_l with their quadrature weights for dgamma
/// (Jacobian included) and 1 - gamma_l^2 computed without cancellation.
struct AngleGrid {
  AngleAxis axis = AngleAxis::jacobi;
  int p = 2;
  QuadratureRule rule;
  std::vector<double> gamma;
  std::vector<double> weight;
  std::vector<double> one_minus_sq;

  AngleGrid(AngleAxis axis, int n, int p);

  /// Weights for the angle law: sum_l law_weight[l] f(gamma_l) approximates
  /// the mean of f(gamma) over a uniformly distributed direction.
  std::vector<double> law_weight;
  std::size_t size() const { return gamma.size(); }
};

/// Transition density K(u, w; alpha, gamma) of the pair (Z'Z, cosine to
/// mu1) for one MEWMA step.  Requires p >= 2 and u > 0.
double transition_kernel_2d(const ChartConfig& cfg, const ShiftSpec& shift, double u, double w,
                            double alpha, double gamma);

/// Zero-state ARL L(alpha, gamma) on the product grid.
struct ArlSurface2D {
  ChartConfig cfg;
  ShiftSpec shift;
  QuadratureRule rule_u;  // z on [0, sqrt(h)], alpha = z^2
  AngleGrid angles;
  Eigen::MatrixXd values; // values(i, j) = L(z_i^2, gamma_j)

  /// Nystrom interpolant for any (alpha, gamma) in [0, h] x [-1, 1].
  double operator()(double alpha, double gamma) const;

  /// Angle-averaged ARL at each radial node: sum_j d(gamma_j) L(i, j) dgamma.
  Eigen::VectorXd angle_averaged() const;
};

ArlSurface2D solve_arl_surface(const ChartConfig& cfg, const ShiftSpec& shift, int r = kDefaultNodes);

/// Same with separate node counts and an explicit angle parameterization.
ArlSurface2D solve_arl_surface(const ChartConfig& cfg, const ShiftSpec& shift, int r_radial, int r_angle,
                               AngleAxis axis);

struct WorstCase {
  double W = 0.0;
  double alpha_worst = 0.0;
};

struct SteadyStateResult {
  double D = 0.0;      // conditional steady-state ARL
  double Dstar = 0.0;  // cyclical steady-state ARL
  double W = 0.0;      // worst-case ARL over alpha at gamma = -1
  double alpha_worst = 0.0;
  double L00 = 0.0;    // zero-state ARL L(0, 0)
};

/// D, D* and W from a solved surface and the matching in-control solutions
/// (same chart, same node count).
SteadyStateResult steady_state_arl(const ArlSurface2D& surface, const InControlAnalysis& incontrol);

SteadyStateResult steady_state_arl(const ChartConfig& cfg, const ShiftSpec& shift, int r = kDefaultNodes);

/// Maximizes alpha -> L(alpha, -1) over [0, h] by golden-section search.
WorstCase worst_case_arl(const ArlSurface2D& surface);

WorstCase worst_case_arl(const ChartConfig& cfg, const ShiftSpec& shift, int r = kDefaultNodes);

/// Worst case per angle: for every gamma node (and gamma = -1) the maximum
/// over alpha.  Used to check numerically that gamma = -1 is the worst angle.
struct AngleScanEntry {
  double gamma = 0.0;
  double W = 0.0;
  double alpha_worst = 0.0;
};

std::vector<AngleScanEntry> scan_worst_case_angles(const ArlSurface2D& surface);

/// Expected detection delays D_tau = E_tau(N - tau + 1 | N >= tau) for
/// tau = 1..tau_max.  D_1 = L(0, 0).
std::vector<double> detection_delay_sequence(const ArlSurface2D& surface, int tau_max);

std::vector<double> detection_delay_sequence(const ChartConfig& cfg, const ShiftSpec& shift, int r,
                                             int tau_max);

/// Hotelling T^2 (Shewhart, lambda = 1) ARL 1 / P(chi2(p, delta) > h4).
/// Returns +infinity when the exceedance probability underflows.
double hotelling_arl(int p, double h4, double delta);

/// Dominant eigenfunction of the in-control two-dimensional kernel on the
/// surface grid, psi(z_i^2, gamma_j), scaled to unit Euclidean norm.
struct QuasiStationary2D {
  QuadratureRule rule_u;
  AngleGrid angles;
  Eigen::MatrixXd values;
  double rho = 0.0;
};

QuasiStationary2D quasi_stationary_2d(const ChartConfig& cfg, int r = kDefaultNodes);

}  // namespace mewma
