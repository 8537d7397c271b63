#include "mewma/incontrol.hpp"

#include "mewma/errors.hpp"
#include "mewma/specfun.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace mewma {

namespace {

constexpr double kPowerTolerance = 1e-12;
constexpr int kPowerMaxIterations = 100000;
constexpr double kMinRcond = 1e-13;

Eigen::VectorXd node_masses(const QuadratureRule& rule) {
  const auto n = static_cast<Eigen::Index>(rule.size());
  Eigen::VectorXd m(n);
  for (Eigen::Index i = 0; i < n; ++i) m[i] = 2.0 * rule.weights[i] * rule.nodes[i];
  return m;
}

Eigen::VectorXd solve_resolvent(const Eigen::MatrixXd& q, const Eigen::VectorXd& rhs, const char* what) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(q.rows(), q.cols()) - q;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > kMinRcond))
    throw SolverError(std::string(what) + ": singular system (threshold too large?)");
  Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite()) throw SolverError(std::string(what) + ": non-finite solution");
  return x;
}

NystromSolution1D make_solution(const ChartConfig& cfg, QuadratureRule rule, SolutionKind kind) {
  return NystromSolution1D{cfg, std::move(rule), Eigen::VectorXd(), kind, 1.0, 0.0};
}

// Normalizes a positive eigenvector to unit area under W.
void normalize_area(NystromSolution1D& s) {
  const double area = s.mass();
  if (!(area > 0.0)) throw SolverError("quasi_stationary: eigenvector has nonpositive area");
  s.values /= area;
}

NystromSolution1D zero_state_from_kernel(const ChartConfig& cfg, const QuadratureRule& rule,
                                         const Eigen::MatrixXd& q_l) {
  auto s = make_solution(cfg, rule, SolutionKind::arl);
  s.values = solve_resolvent(q_l, Eigen::VectorXd::Ones(q_l.rows()), "zero_state_arl_incontrol");
  if (s.values.minCoeff() < 1.0 - 1e-9)
    throw SolverError("zero_state_arl_incontrol: ARL below one (system ill-posed)");
  return s;
}

NystromSolution1D power_iteration(const ChartConfig& cfg, const QuadratureRule& rule,
                                  const Eigen::MatrixXd& q_psi) {
  auto s = make_solution(cfg, rule, SolutionKind::eigenfunction);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(q_psi.rows(), 1.0 / q_psi.rows());
  double rho = 0.0;
  bool converged = false;
  for (int it = 0; it < kPowerMaxIterations; ++it) {
    Eigen::VectorXd y = q_psi * x;
    const double sum = y.sum();
    if (!(sum > 0.0)) throw SolverError("quasi_stationary: kernel annihilates the iterate");
    rho = sum / x.sum();
    y /= sum;
    const double change = (y - x).cwiseAbs().maxCoeff() / y.cwiseAbs().maxCoeff();
    x = std::move(y);
    if (change < kPowerTolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) throw SolverError("quasi_stationary: power iteration did not converge");
  s.values = std::move(x);
  s.rho = rho;
  normalize_area(s);
  return s;
}

NystromSolution1D cyclical_from_kernel(const ChartConfig& cfg, const QuadratureRule& rule,
                                       const Eigen::MatrixXd& q_psi, const NystromSolution1D& arl) {
  auto s = make_solution(cfg, rule, SolutionKind::stationary);
  s.psi0_atom = 1.0 / arl(0.0);
  const auto n = static_cast<Eigen::Index>(rule.size());
  Eigen::VectorXd f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = rule.nodes[i];
    f[i] = s.psi0_atom * incontrol_kernel(cfg, z * z, 0.0);
  }
  s.values = solve_resolvent(q_psi, f, "cyclical_stationary");
  return s;
}

}  // namespace

double incontrol_kernel(const ChartConfig& cfg, double u, double alpha) {
  const double l2 = cfg.lambda() * cfg.lambda();
  return std::exp(specfun::log_noncentral_chi2_pdf(u / l2, cfg.p(), cfg.eta() * alpha)) / l2;
}

QuadratureRule radial_rule(const ChartConfig& cfg, int r) {
  return mapped_gauss_legendre(r, 0.0, std::sqrt(cfg.h()), kRadialMap);
}

double NystromSolution1D::operator()(double alpha) const {
  const auto n = static_cast<Eigen::Index>(rule.size());
  double sum = 0.0;
  switch (kind) {
    case SolutionKind::arl:
      for (Eigen::Index j = 0; j < n; ++j) {
        const double z = rule.nodes[j];
        sum += 2.0 * rule.weights[j] * z * values[j] * incontrol_kernel(cfg, z * z, alpha);
      }
      return 1.0 + sum;
    case SolutionKind::eigenfunction:
      for (Eigen::Index j = 0; j < n; ++j) {
        const double z = rule.nodes[j];
        sum += 2.0 * rule.weights[j] * z * values[j] * incontrol_kernel(cfg, alpha, z * z);
      }
      return sum / rho;
    case SolutionKind::stationary:
      for (Eigen::Index j = 0; j < n; ++j) {
        const double z = rule.nodes[j];
        sum += 2.0 * rule.weights[j] * z * values[j] * incontrol_kernel(cfg, alpha, z * z);
      }
      return psi0_atom * incontrol_kernel(cfg, alpha, 0.0) + sum;
  }
  return sum;
}

double NystromSolution1D::refined(double alpha, int fine_nodes) const {
  if (kind != SolutionKind::arl) throw std::logic_error("refined: only defined for ARL solutions");
  const auto fine = gauss_legendre(fine_nodes, 0.0, std::sqrt(cfg.h()));
  double sum = 0.0;
  for (std::size_t k = 0; k < fine.size(); ++k) {
    const double z = fine.nodes[k];
    sum += 2.0 * fine.weights[k] * z * incontrol_kernel(cfg, z * z, alpha) * (*this)(z * z);
  }
  return 1.0 + sum;
}

Eigen::VectorXd NystromSolution1D::mass_weights() const { return node_masses(rule); }

double NystromSolution1D::mass() const { return mass_weights().dot(values); }

Eigen::MatrixXd build_kernel_L(const ChartConfig& cfg, const QuadratureRule& rule) {
  const auto n = static_cast<Eigen::Index>(rule.size());
  Eigen::MatrixXd q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double zi = rule.nodes[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      const double zj = rule.nodes[j];
      q(i, j) = rule.weights[j] * incontrol_kernel(cfg, zj * zj, zi * zi) * 2.0 * zj;
    }
  }
  return q;
}

Eigen::MatrixXd build_kernel_psi(const ChartConfig& cfg, const QuadratureRule& rule) {
  const auto n = static_cast<Eigen::Index>(rule.size());
  Eigen::MatrixXd q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double zi = rule.nodes[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      const double zj = rule.nodes[j];
      q(i, j) = rule.weights[j] * incontrol_kernel(cfg, zi * zi, zj * zj) * 2.0 * zj;
    }
  }
  return q;
}

NystromSolution1D zero_state_arl_incontrol(const ChartConfig& cfg, int r) {
  const auto rule = radial_rule(cfg, r);
  return zero_state_from_kernel(cfg, rule, build_kernel_L(cfg, rule));
}

NystromSolution1D quasi_stationary(const ChartConfig& cfg, int r) {
  const auto rule = radial_rule(cfg, r);
  return power_iteration(cfg, rule, build_kernel_psi(cfg, rule));
}

NystromSolution1D quasi_stationary_dense(const ChartConfig& cfg, int r) {
  const auto rule = radial_rule(cfg, r);
  const Eigen::MatrixXd q = build_kernel_psi(cfg, rule);
  Eigen::EigenSolver<Eigen::MatrixXd> es(q);
  if (es.info() != Eigen::Success) throw SolverError("quasi_stationary_dense: eigensolver failed");
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < q.rows(); ++k)
    if (es.eigenvalues()[k].real() > es.eigenvalues()[best].real()) best = k;
  auto s = make_solution(cfg, rule, SolutionKind::eigenfunction);
  s.rho = es.eigenvalues()[best].real();
  s.values = es.eigenvectors().col(best).real();
  if (s.values.sum() < 0.0) s.values = -s.values;
  normalize_area(s);
  return s;
}

NystromSolution1D cyclical_stationary(const ChartConfig& cfg, int r) {
  const auto rule = radial_rule(cfg, r);
  const auto arl = zero_state_from_kernel(cfg, rule, build_kernel_L(cfg, rule));
  return cyclical_from_kernel(cfg, rule, build_kernel_psi(cfg, rule), arl);
}

InControlAnalysis analyze_incontrol(const ChartConfig& cfg, int r) {
  const auto rule = radial_rule(cfg, r);
  const Eigen::MatrixXd q_l = build_kernel_L(cfg, rule);
  // q_psi(i, j) = q_l(j, i) * m_j / m_i with m = 2 w z.
  const Eigen::VectorXd m = node_masses(rule);
  const Eigen::MatrixXd q_psi = m.cwiseInverse().asDiagonal() * q_l.transpose() * m.asDiagonal();
  auto arl = zero_state_from_kernel(cfg, rule, q_l);
  auto psi = power_iteration(cfg, rule, q_psi);
  auto psi_star = cyclical_from_kernel(cfg, rule, q_psi, arl);
  return {std::move(arl), std::move(psi), std::move(psi_star)};
}

InControlSteadyState steady_state_arl_incontrol(const InControlAnalysis& a) {
  const Eigen::VectorXd m = a.arl.mass_weights();
  const Eigen::VectorXd wpsi = m.cwiseProduct(a.psi.values);
  const Eigen::VectorXd wpsi_star = m.cwiseProduct(a.psi_star.values);
  InControlSteadyState out;
  out.L0 = a.arl.refined(0.0);
  out.psi0 = a.psi_star.psi0_atom;
  out.rho = a.psi.rho;
  out.D = wpsi.dot(a.arl.values) / wpsi.sum();
  out.Dstar = out.psi0 * a.arl(0.0) + wpsi_star.dot(a.arl.values);
  return out;
}

InControlSteadyState steady_state_arl_incontrol(const ChartConfig& cfg, int r) {
  return steady_state_arl_incontrol(analyze_incontrol(cfg, r));
}

}  // namespace mewma
