#include "mewma/outofcontrol.hpp"

#include "mewma/errors.hpp"
#include "mewma/parallel.hpp"
#include "mewma/scalar_search.hpp"
#include "mewma/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mewma {

namespace {

constexpr double kMinRcond = 1e-13;
constexpr double kWorstCaseRelTol = 1e-8;
constexpr double kPowerTolerance = 1e-12;
constexpr int kPowerMaxIterations = 100000;
// exp() of anything below this is zero in double precision.
constexpr double kLogUnderflow = -745.0;

void require_dimension(const ChartConfig& cfg) {
  if (cfg.p() < 2)
    throw std::invalid_argument("out-of-control ARL needs p >= 2 (the kernel uses p - 1 degrees of freedom)");
}

// Target-node quantities of the substituted kernel, flattened as k * r + l.
struct TargetGrid {
  Eigen::VectorXd prefactor;   // w_k 2 z_k^2 * angle weight_l / (lambda^3 sqrt(2 pi))
  Eigen::VectorXd axial;       // z_k gamma_l
  Eigen::VectorXd chi_arg;     // z_k^2 (1 - gamma_l^2) / lambda^2

  TargetGrid(const ChartConfig& cfg, const QuadratureRule& ru, const AngleGrid& ag) {
    const auto nu = static_cast<Eigen::Index>(ru.size());
    const auto r = static_cast<Eigen::Index>(ag.size());
    const double lam = cfg.lambda();
    const double c = 1.0 / (lam * lam * lam * std::sqrt(2.0 * std::numbers::pi));
    prefactor.resize(nu * r);
    axial.resize(nu * r);
    chi_arg.resize(nu * r);
    for (Eigen::Index k = 0; k < nu; ++k) {
      const double z = ru.nodes[k];
      for (Eigen::Index l = 0; l < r; ++l) {
        const Eigen::Index J = k * r + l;
        prefactor[J] = c * ru.weights[k] * 2.0 * z * z * ag.weight[l];
        axial[J] = z * ag.gamma[l];
        chi_arg[J] = z * z * ag.one_minus_sq[l] / (lam * lam);
      }
    }
  }

  // Kernel weights from the source state (sqrt(alpha), gamma) to every node.
  template <class Row>
  void fill(const ChartConfig& cfg, const ShiftSpec& shift, double sqrt_alpha, double gamma,
            double one_minus_gamma_sq, Row&& row) const {
    const double lam = cfg.lambda();
    const double mean = lam * shift.sqrt_delta() + (1.0 - lam) * sqrt_alpha * gamma;
    const double nc = cfg.eta() * sqrt_alpha * sqrt_alpha * one_minus_gamma_sq;
    const double inv_two_var = 1.0 / (2.0 * lam * lam);
    for (Eigen::Index J = 0; J < prefactor.size(); ++J) {
      const double d = axial[J] - mean;
      const double log_gauss = -d * d * inv_two_var;
      if (log_gauss < kLogUnderflow) {
        row(J) = 0.0;
        continue;
      }
      const double log_chi = specfun::log_noncentral_chi2_pdf(chi_arg[J], cfg.p() - 1, nc);
      row(J) = prefactor[J] * std::exp(log_gauss + log_chi);
    }
  }
};

}  // namespace

AngleAxis default_angle_axis(int) { return AngleAxis::jacobi; }

AngleGrid::AngleGrid(AngleAxis ax, int n, int dim) : axis(ax), p(dim) {
  if (p < 2) throw std::invalid_argument("AngleGrid: dimension must be >= 2");
  const double log_norm = specfun::log_angle_normalizer(p);
  switch (axis) {
    case AngleAxis::jacobi: {
      const double e = 0.5 * (p - 3);
      rule = gauss_jacobi_symmetric(n, e);
      for (int l = 0; l < n; ++l) {
        const double g = rule.nodes[l];
        const double oms = (1.0 - g) * (1.0 + g);
        gamma.push_back(g);
        one_minus_sq.push_back(oms);
        weight.push_back(rule.weights[l] * std::pow(oms, -e));
        law_weight.push_back(rule.weights[l] * std::exp(-log_norm));
      }
      break;
    }
    case AngleAxis::sine:
      rule = gauss_legendre(n, -std::numbers::pi / 2, std::numbers::pi / 2);
      for (int l = 0; l < n; ++l) {
        const double t = rule.nodes[l];
        const double ct = std::cos(t);
        gamma.push_back(std::sin(t));
        weight.push_back(rule.weights[l] * ct);
        one_minus_sq.push_back(ct * ct);
        // d(gamma) dgamma = d(theta) dtheta with theta = t + pi/2.
        law_weight.push_back(rule.weights[l] * specfun::angle_density_theta(t + std::numbers::pi / 2, p));
      }
      break;
    case AngleAxis::direct:
      rule = gauss_legendre(n, -1.0, 1.0);
      for (int l = 0; l < n; ++l) {
        const double g = rule.nodes[l];
        gamma.push_back(g);
        weight.push_back(rule.weights[l]);
        one_minus_sq.push_back((1.0 - g) * (1.0 + g));
        law_weight.push_back(rule.weights[l] * specfun::angle_density_gamma(g, p));
      }
      break;
  }
}

double transition_kernel_2d(const ChartConfig& cfg, const ShiftSpec& shift, double u, double w,
                            double alpha, double gamma) {
  require_dimension(cfg);
  const double lam = cfg.lambda();
  const double su = std::sqrt(u);
  const double d = su * w - lam * shift.sqrt_delta() - (1.0 - lam) * std::sqrt(alpha) * gamma;
  const double gauss = su / (lam * std::sqrt(2.0 * std::numbers::pi)) * std::exp(-d * d / (2.0 * lam * lam));
  const double one_minus_w2 = (1.0 - w) * (1.0 + w);
  const double one_minus_g2 = (1.0 - gamma) * (1.0 + gamma);
  const double chi = specfun::noncentral_chi2_pdf(u * one_minus_w2 / (lam * lam), cfg.p() - 1,
                                                  cfg.eta() * alpha * one_minus_g2);
  return gauss * chi / (lam * lam);
}

double ArlSurface2D::operator()(double alpha, double gamma) const {
  if (alpha < 0.0 || std::abs(gamma) > 1.0)
    throw std::domain_error("ArlSurface2D: need alpha >= 0 and |gamma| <= 1");
  const TargetGrid grid(cfg, rule_u, angles);
  const auto nu = values.rows();
  const auto r = values.cols();
  Eigen::VectorXd row(nu * r);
  grid.fill(cfg, shift, std::sqrt(alpha), gamma, (1.0 - gamma) * (1.0 + gamma),
            [&](Eigen::Index J) -> double& { return row[J]; });
  double sum = 0.0;
  for (Eigen::Index k = 0; k < nu; ++k)
    for (Eigen::Index l = 0; l < r; ++l) sum += row[k * r + l] * values(k, l);
  return 1.0 + sum;
}

Eigen::VectorXd ArlSurface2D::angle_averaged() const {
  const Eigen::Map<const Eigen::VectorXd> a(angles.law_weight.data(), static_cast<Eigen::Index>(angles.size()));
  return values * a;
}

ArlSurface2D solve_arl_surface(const ChartConfig& cfg, const ShiftSpec& shift, int r) {
  return solve_arl_surface(cfg, shift, r, r, default_angle_axis(cfg.p()));
}

ArlSurface2D solve_arl_surface(const ChartConfig& cfg, const ShiftSpec& shift, int r_radial, int r_angle,
                               AngleAxis axis) {
  require_dimension(cfg);
  if (r_radial < 2 || r_angle < 2)
    throw std::invalid_argument("solve_arl_surface: need at least two nodes per axis");
  ArlSurface2D s{cfg, shift, radial_rule(cfg, r_radial), AngleGrid(axis, r_angle, cfg.p()), Eigen::MatrixXd()};
  const TargetGrid grid(cfg, s.rule_u, s.angles);
  const Eigen::Index ru = r_radial;
  const Eigen::Index r = r_angle;
  const Eigen::Index n = ru * r;

  // a = I - Q with row I = i r + j the source node.
  Eigen::MatrixXd a(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    for (auto I = static_cast<Eigen::Index>(begin); I < static_cast<Eigen::Index>(end); ++I) {
      const Eigen::Index i = I / r;
      const Eigen::Index j = I % r;
      grid.fill(cfg, shift, s.rule_u.nodes[i], s.angles.gamma[j], s.angles.one_minus_sq[j],
                [&](Eigen::Index J) -> double& { return a(I, J); });
    }
  });
  a = Eigen::MatrixXd::Identity(n, n) - a;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > kMinRcond)) throw SolverError("solve_arl_surface: singular system");
  const Eigen::VectorXd flat = lu.solve(Eigen::VectorXd::Ones(n));
  if (!flat.allFinite()) throw SolverError("solve_arl_surface: non-finite solution");
  s.values.resize(ru, r);
  for (Eigen::Index i = 0; i < ru; ++i)
    for (Eigen::Index j = 0; j < r; ++j) s.values(i, j) = flat[i * r + j];
  if (s.values.minCoeff() < 1.0 - 1e-9) throw SolverError("solve_arl_surface: ARL below one");
  return s;
}

WorstCase worst_case_arl(const ArlSurface2D& surface) {
  const double h = surface.cfg.h();
  const auto best = golden_section_maximize([&](double alpha) { return surface(alpha, -1.0); }, 0.0, h,
                                            kWorstCaseRelTol * h);
  return {best.fx, best.x};
}

WorstCase worst_case_arl(const ChartConfig& cfg, const ShiftSpec& shift, int r) {
  return worst_case_arl(solve_arl_surface(cfg, shift, r));
}

SteadyStateResult steady_state_arl(const ArlSurface2D& surface, const InControlAnalysis& ic) {
  if (ic.arl.rule.size() != surface.rule_u.size())
    throw std::invalid_argument("steady_state_arl: in-control and surface grids differ");
  const Eigen::VectorXd g = surface.angle_averaged();
  const Eigen::VectorXd m = ic.psi.mass_weights();
  const Eigen::VectorXd wpsi = m.cwiseProduct(ic.psi.values);
  const Eigen::VectorXd wpsi_star = m.cwiseProduct(ic.psi_star.values);

  SteadyStateResult out;
  out.L00 = surface(0.0, 0.0);
  out.D = wpsi.dot(g) / wpsi.sum();
  out.Dstar = wpsi_star.dot(g) + ic.psi_star.psi0_atom * out.L00;
  const auto wc = worst_case_arl(surface);
  out.W = wc.W;
  out.alpha_worst = wc.alpha_worst;
  return out;
}

SteadyStateResult steady_state_arl(const ChartConfig& cfg, const ShiftSpec& shift, int r) {
  return steady_state_arl(solve_arl_surface(cfg, shift, r), analyze_incontrol(cfg, r));
}

std::vector<AngleScanEntry> scan_worst_case_angles(const ArlSurface2D& surface) {
  const double h = surface.cfg.h();
  std::vector<double> gammas{-1.0};
  gammas.insert(gammas.end(), surface.angles.gamma.begin(), surface.angles.gamma.end());
  gammas.push_back(1.0);
  std::vector<AngleScanEntry> out;
  for (double gamma : gammas) {
    const auto best = golden_section_maximize([&](double alpha) { return surface(alpha, gamma); }, 0.0, h,
                                              1e-6 * h);
    out.push_back({gamma, best.fx, best.x});
  }
  return out;
}

std::vector<double> detection_delay_sequence(const ArlSurface2D& surface, int tau_max) {
  if (tau_max < 1) throw std::invalid_argument("detection_delay_sequence: tau_max must be >= 1");
  const ChartConfig& cfg = surface.cfg;
  const auto& rule = surface.rule_u;
  const Eigen::VectorXd g = surface.angle_averaged();
  const Eigen::MatrixXd q_psi = build_kernel_psi(cfg, rule);
  const auto r = static_cast<Eigen::Index>(rule.size());
  Eigen::VectorXd m(r);
  Eigen::VectorXd density(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double z = rule.nodes[i];
    m[i] = 2.0 * rule.weights[i] * z;
    density[i] = incontrol_kernel(cfg, z * z, 0.0);
  }

  std::vector<double> delays;
  delays.reserve(tau_max);
  delays.push_back(surface(0.0, 0.0));
  for (int tau = 2; tau <= tau_max; ++tau) {
    // density holds the radial law of Z_{tau-1} given N >= tau, up to scale.
    const Eigen::VectorXd wd = m.cwiseProduct(density);
    const double kept = wd.sum();
    if (!(kept > 0.0)) throw SolverError("detection_delay_sequence: survival mass vanished");
    delays.push_back(wd.dot(g) / kept);
    density = q_psi * (density / kept);
  }
  return delays;
}

std::vector<double> detection_delay_sequence(const ChartConfig& cfg, const ShiftSpec& shift, int r,
                                             int tau_max) {
  return detection_delay_sequence(solve_arl_surface(cfg, shift, r), tau_max);
}

double hotelling_arl(int p, double h4, double delta) {
  if (!(h4 > 0.0)) throw std::invalid_argument("hotelling_arl: threshold must be positive");
  const double exceed = specfun::noncentral_chi2_sf(h4, p, delta);
  if (!(exceed > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / exceed;
}

QuasiStationary2D quasi_stationary_2d(const ChartConfig& cfg, int r) {
  require_dimension(cfg);
  QuasiStationary2D out{radial_rule(cfg, r), AngleGrid(default_angle_axis(cfg.p()), r, cfg.p()), Eigen::MatrixXd(), 0.0};
  const ShiftSpec none(0.0);
  const Eigen::Index n = static_cast<Eigen::Index>(r) * r;
  const auto& ru = out.rule_u;
  const auto& ag = out.angles;

  // b(I, J): target I = (i, j), source J = (k, l) with source measure
  // 2 w_k z_k dz times the angle weight.
  Eigen::MatrixXd b(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    for (auto I = static_cast<Eigen::Index>(begin); I < static_cast<Eigen::Index>(end); ++I) {
      const double zi = ru.nodes[I / r];
      const double wi = ag.gamma[I % r];
      for (Eigen::Index k = 0; k < r; ++k) {
        const double zk = ru.nodes[k];
        for (Eigen::Index l = 0; l < r; ++l) {
          const double measure = 2.0 * ru.weights[k] * zk * ag.weight[l];
          b(I, k * r + l) = measure * transition_kernel_2d(cfg, none, zi * zi, wi, zk * zk, ag.gamma[l]);
        }
      }
    }
  });

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  bool converged = false;
  for (int it = 0; it < kPowerMaxIterations; ++it) {
    Eigen::VectorXd y = b * x;
    out.rho = x.dot(y);
    y.normalize();
    const double change = (y - x).cwiseAbs().maxCoeff() / y.cwiseAbs().maxCoeff();
    x = std::move(y);
    if (change < kPowerTolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) throw SolverError("quasi_stationary_2d: power iteration did not converge");
  out.values.resize(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) out.values(i, j) = x[i * r + j];
  return out;
}

}  // namespace mewma
