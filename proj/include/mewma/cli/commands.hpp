#pragma once

// Subcommands of mewma-arl.  Each takes already-parsed options and returns
// the table to print plus any warnings; argument parsing lives in the tool.

#include "mewma/calibrate.hpp"
#include "mewma/cli/output_table.hpp"
#include "mewma/montecarlo.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mewma::cli {

struct CommandResult {
  OutputTable table;
  std::vector<std::string> warnings;
};

/// Threshold from exactly one of h4 / target_arl; throws std::invalid_argument otherwise.
double resolve_h4(int p, double lambda, std::optional<double> h4, std::optional<double> target_arl, int r);

struct ArlOptions {
  int p = 2;
  double lambda = 0.1;
  std::optional<double> h4;
  std::optional<double> target_arl;
  std::vector<double> sqrt_delta{1.0};
  std::string type = "all";  // zero, cond, cyc, worst or all
  int r = kDefaultNodes;
};

CommandResult cmd_arl(const ArlOptions& opt);

struct Table1Options {
  int r = kDefaultNodes;
  double target_arl = 200.0;
};

/// In-control zero-state, conditional and cyclical steady-state ARLs for
/// lambda in {0.05, 0.1, 0.2} and p in {2, 3, 4, 5, 10, 20, 50}.
CommandResult cmd_table1(const Table1Options& opt);

struct Table2Options {
  int r = kDefaultNodes;
  /// Calibrate h4 to target_arl instead of using the published thresholds
  /// 8.64, 10.784, 12.73 and 22.67.
  bool calibrate = false;
  double target_arl = 200.0;
};

/// Zero-state, conditional, cyclical and worst-case ARLs for lambda = 0.1,
/// p in {2, 3, 4, 10} and sqrt(delta) in {0, 0.5, 1, 1.5, 2, 3}.
CommandResult cmd_table2(const Table2Options& opt);

/// The published lambda = 0.1 thresholds used by cmd_table2.
double table2_threshold(int p);

struct MapOptions {
  int p = 2;
  double lambda = 0.1;
  std::optional<double> h4;
  std::optional<double> target_arl;
  double sqrt_delta = 1.0;
  int grid = 41;
  int r = kDefaultNodes;
};

/// Grid over alpha in [0, h] and theta in [0, pi] (theta is the angle
/// between Z and the shift direction) with columns alpha, theta, L, psi,
/// where psi(alpha, theta) = d(theta) psi0(alpha) is the in-control
/// quasi-stationary density.
CommandResult cmd_map(const MapOptions& opt);

struct OptLambdaOptions {
  int p = 2;
  double sqrt_delta = 1.0;
  double target_arl = 200.0;
  Criterion criterion = Criterion::zero_state;
  double lambda_lo = 0.005;
  double lambda_hi = 1.0;
  int r = kDefaultNodes;
};

CommandResult cmd_optlambda(const OptLambdaOptions& opt);

/// Criterion ARL on a lambda grid (each point calibrated to the target).
CommandResult cmd_optlambda_profile(const OptLambdaOptions& opt, const std::vector<double>& lambdas);

/// Default profile grid: 0.01, 0.02, ..., 0.5.
std::vector<double> default_profile_grid();

struct McOptions {
  int p = 2;
  double lambda = 0.1;
  std::optional<double> h4;
  std::optional<double> target_arl;
  double sqrt_delta = 1.0;
  std::int64_t replications = 1'000'000;
  std::uint64_t seed = 1;
  int tau = kDefaultChangePoint;
  SimulationMode mode = SimulationMode::zero_state;
  int r = kDefaultNodes;
};

/// Simulated ARL next to the integral-equation value and the z-score.
CommandResult cmd_mc(const McOptions& opt);

/// Writes text to path; throws std::runtime_error when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mewma::cli
