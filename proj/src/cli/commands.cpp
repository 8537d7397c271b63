#include "mewma/cli/commands.hpp"

#include "mewma/incontrol.hpp"
#include "mewma/outofcontrol.hpp"
#include "mewma/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace mewma::cli {

namespace {

constexpr double kTable2Lambda = 0.1;
const std::vector<double> kTable2Shifts{0.0, 0.5, 1.0, 1.5, 2.0, 3.0};

struct ArlColumns {
  bool zero = false, cond = false, cyc = false, worst = false;
};

ArlColumns parse_type(const std::string& type) {
  if (type == "all") return {true, true, true, true};
  ArlColumns c;
  if (type == "zero") c.zero = true;
  else if (type == "cond") c.cond = true;
  else if (type == "cyc") c.cyc = true;
  else if (type == "worst") c.worst = true;
  else throw std::invalid_argument("unknown ARL type '" + type + "' (zero, cond, cyc, worst or all)");
  return c;
}

void require_nodes(int r) {
  if (r < 2) throw std::invalid_argument("--r must be at least 2");
}

}  // namespace

double resolve_h4(int p, double lambda, std::optional<double> h4, std::optional<double> target_arl, int r) {
  if (h4 && target_arl) throw std::invalid_argument("give either --h4 or --target-arl, not both");
  if (h4) return *h4;
  if (target_arl) return calibrate_h4(p, lambda, {*target_arl, Criterion::zero_state}, r);
  throw std::invalid_argument("one of --h4 or --target-arl is required");
}

CommandResult cmd_arl(const ArlOptions& opt) {
  require_nodes(opt.r);
  const auto cols = parse_type(opt.type);
  const ChartConfig cfg(opt.p, opt.lambda, resolve_h4(opt.p, opt.lambda, opt.h4, opt.target_arl, opt.r));
  std::vector<Column> header{{"sqrt_delta", ColumnKind::real}, {"h4", ColumnKind::real}};
  if (cols.zero) header.push_back({"zero", ColumnKind::arl});
  if (cols.cond) header.push_back({"cond", ColumnKind::arl});
  if (cols.cyc) header.push_back({"cyc", ColumnKind::arl});
  if (cols.worst) header.push_back({"worst", ColumnKind::arl});
  CommandResult out{OutputTable(header), {}};

  std::optional<InControlAnalysis> incontrol;
  if (cols.cond || cols.cyc) incontrol = analyze_incontrol(cfg, opt.r);
  for (double s : opt.sqrt_delta) {
    const auto surface = solve_arl_surface(cfg, ShiftSpec::from_distance(s), opt.r);
    std::vector<Cell> row{s, cfg.h4()};
    if (cols.zero) row.push_back(surface(0.0, 0.0));
    if (incontrol) {
      const auto ss = steady_state_arl(surface, *incontrol);
      if (cols.cond) row.push_back(ss.D);
      if (cols.cyc) row.push_back(ss.Dstar);
      if (cols.worst) row.push_back(ss.W);
    } else if (cols.worst) {
      row.push_back(worst_case_arl(surface).W);
    }
    out.table.add_row(std::move(row));
  }
  return out;
}

CommandResult cmd_table1(const Table1Options& opt) {
  require_nodes(opt.r);
  CommandResult out{OutputTable({{"lambda", ColumnKind::real},
                                 {"p", ColumnKind::integer},
                                 {"h4", ColumnKind::real},
                                 {"zero", ColumnKind::arl},
                                 {"cond", ColumnKind::arl},
                                 {"cyc", ColumnKind::arl}}),
                    {}};
  for (double lambda : {0.05, 0.1, 0.2}) {
    for (int p : {2, 3, 4, 5, 10, 20, 50}) {
      const double h4 = calibrate_h4(p, lambda, {opt.target_arl, Criterion::zero_state}, opt.r);
      const auto ss = steady_state_arl_incontrol(ChartConfig(p, lambda, h4), opt.r);
      out.table.add_row({lambda, static_cast<double>(p), h4, ss.L0, ss.D, ss.Dstar});
    }
  }
  return out;
}

double table2_threshold(int p) {
  switch (p) {
    case 2: return 8.64;
    case 3: return 10.784;
    case 4: return 12.73;
    case 10: return 22.67;
    default: throw std::invalid_argument("no published threshold for p = " + std::to_string(p));
  }
}

CommandResult cmd_table2(const Table2Options& opt) {
  require_nodes(opt.r);
  CommandResult out{OutputTable({{"p", ColumnKind::integer},
                                 {"h4", ColumnKind::real},
                                 {"sqrt_delta", ColumnKind::real},
                                 {"zero", ColumnKind::arl},
                                 {"cond", ColumnKind::arl},
                                 {"cyc", ColumnKind::arl},
                                 {"worst", ColumnKind::arl}}),
                    {}};
  for (int p : {2, 3, 4, 10}) {
    const double h4 = opt.calibrate
                          ? calibrate_h4(p, kTable2Lambda, {opt.target_arl, Criterion::zero_state}, opt.r)
                          : table2_threshold(p);
    const ChartConfig cfg(p, kTable2Lambda, h4);
    const auto incontrol = analyze_incontrol(cfg, opt.r);
    for (double s : kTable2Shifts) {
      const auto surface = solve_arl_surface(cfg, ShiftSpec::from_distance(s), opt.r);
      const auto ss = steady_state_arl(surface, incontrol);
      out.table.add_row({static_cast<double>(p), h4, s, ss.L00, ss.D, ss.Dstar, ss.W});
    }
  }
  return out;
}

CommandResult cmd_map(const MapOptions& opt) {
  require_nodes(opt.r);
  if (opt.grid < 2) throw std::invalid_argument("--grid must be at least 2");
  const ChartConfig cfg(opt.p, opt.lambda, resolve_h4(opt.p, opt.lambda, opt.h4, opt.target_arl, opt.r));
  const auto surface = solve_arl_surface(cfg, ShiftSpec::from_distance(opt.sqrt_delta), opt.r);
  const auto psi = quasi_stationary(cfg, opt.r);
  CommandResult out{OutputTable({{"alpha", ColumnKind::real},
                                 {"theta", ColumnKind::real},
                                 {"L", ColumnKind::arl},
                                 {"psi", ColumnKind::real}}),
                    {}};
  const int n = opt.grid;
  for (int i = 0; i < n; ++i) {
    const double alpha = cfg.h() * i / (n - 1);
    const double psi_alpha = psi(alpha);
    for (int j = 0; j < n; ++j) {
      const double theta = std::numbers::pi * j / (n - 1);
      // cos(pi) is not exactly -1; clamp so the endpoint maps onto the grid edge.
      const double gamma = std::clamp(std::cos(theta), -1.0, 1.0);
      out.table.add_row({alpha, theta, surface(alpha, gamma),
                         specfun::angle_density_theta(theta, cfg.p()) * psi_alpha});
    }
  }
  return out;
}

CommandResult cmd_optlambda(const OptLambdaOptions& opt) {
  require_nodes(opt.r);
  const CalibrationTarget target{opt.target_arl, opt.criterion};
  const auto best = optimal_lambda(opt.p, opt.sqrt_delta * opt.sqrt_delta, target, opt.r, opt.lambda_lo,
                                   opt.lambda_hi);
  CommandResult out{OutputTable({{"criterion", ColumnKind::text},
                                 {"lambda_opt", ColumnKind::real},
                                 {"h4", ColumnKind::real},
                                 {"arl", ColumnKind::arl},
                                 {"evaluations", ColumnKind::integer}}),
                    {}};
  out.table.add_row({to_string(opt.criterion), best.lambda, best.h4, best.arl, static_cast<double>(best.evaluations)});
  if (best.boundary) out.warnings.push_back("optimum lies on the boundary of the lambda range");
  if (best.nonconvex) out.warnings.push_back("lambda profile is not unimodal on the search range");
  return out;
}

std::vector<double> default_profile_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 50; ++k) grid.push_back(0.01 * k);
  return grid;
}

CommandResult cmd_optlambda_profile(const OptLambdaOptions& opt, const std::vector<double>& lambdas) {
  require_nodes(opt.r);
  const auto profile = lambda_profile(opt.p, opt.sqrt_delta * opt.sqrt_delta,
                                      {opt.target_arl, opt.criterion}, lambdas, opt.r);
  CommandResult out{OutputTable({{"lambda", ColumnKind::real}, {"h4", ColumnKind::real}, {"arl", ColumnKind::arl}}),
                    {}};
  for (const auto& pt : profile) out.table.add_row({pt.lambda, pt.h4, pt.arl});
  return out;
}

CommandResult cmd_mc(const McOptions& opt) {
  require_nodes(opt.r);
  const ChartConfig cfg(opt.p, opt.lambda, resolve_h4(opt.p, opt.lambda, opt.h4, opt.target_arl, opt.r));
  const ShiftSpec shift = ShiftSpec::from_distance(opt.sqrt_delta);
  SimulationPlan plan{cfg, shift.delta(), opt.replications, opt.seed, opt.tau, opt.mode};
  const auto sample = simulate_arl(plan);

  const auto surface = solve_arl_surface(cfg, shift, opt.r);
  double reference = surface(0.0, 0.0);
  std::string mode = "zero";
  if (opt.mode != SimulationMode::zero_state) {
    const auto ss = steady_state_arl(surface, analyze_incontrol(cfg, opt.r));
    reference = opt.mode == SimulationMode::conditional ? ss.D : ss.Dstar;
    mode = opt.mode == SimulationMode::conditional ? "cond" : "cyc";
  }
  const double z = sample.std_error > 0.0 ? (sample.mean - reference) / sample.std_error : 0.0;
  CommandResult out{OutputTable({{"mode", ColumnKind::text},
                                 {"tau", ColumnKind::integer},
                                 {"mc_mean", ColumnKind::arl},
                                 {"std_error", ColumnKind::real},
                                 {"n_effective", ColumnKind::integer},
                                 {"discarded", ColumnKind::integer},
                                 {"integral", ColumnKind::arl},
                                 {"z", ColumnKind::real}}),
                    {}};
  out.table.add_row({mode, static_cast<double>(opt.mode == SimulationMode::zero_state ? 1 : opt.tau), sample.mean,
                     sample.std_error, static_cast<double>(sample.n_effective),
                     static_cast<double>(sample.discarded), reference, z});
  if (sample.pre_asymptotic)
    out.warnings.push_back("tau = " + std::to_string(opt.tau) +
                           " may be too small for the steady-state regime (result is pre-asymptotic)");
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace mewma::cli
