#include "mewma/cli/commands.hpp"
#include "mewma/parallel.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

using namespace mewma;
using namespace mewma::cli;

namespace {

struct ChartFlags {
  int p = 2;
  double lambda = 0.1;
  std::optional<double> h4;
  std::optional<double> target_arl;
};

void add_chart_flags(CLI::App* cmd, ChartFlags& f) {
  cmd->add_option("--p", f.p, "dimension")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", f.lambda, "smoothing constant in (0, 1]")->required();
  auto* h4 = cmd->add_option("--h4", f.h4, "alarm threshold on T^2");
  auto* target = cmd->add_option("--target-arl", f.target_arl, "calibrate h4 to this in-control ARL");
  h4->excludes(target);
}

void emit(const CommandResult& result, Format format) {
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  result.table.write(std::cout, format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run-length properties of multivariate EWMA control charts"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format_name = "plain";
  unsigned threads = 0;
  app.add_option("--format", format_name, "output format: plain or csv")->check(CLI::IsMember({"plain", "csv"}));
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  int r = kDefaultNodes;
  app.add_option("--r", r, "quadrature nodes per axis")->check(CLI::Range(2, 500));

  ChartFlags arl_chart;
  ArlOptions arl;
  auto* arl_cmd = app.add_subcommand("arl", "ARL of one chart for one or more shifts");
  add_chart_flags(arl_cmd, arl_chart);
  arl_cmd->add_option("--sqrt-delta", arl.sqrt_delta, "shift size sqrt(delta), repeatable")->required();
  arl_cmd->add_option("--type", arl.type, "zero, cond, cyc, worst or all")
      ->check(CLI::IsMember({"zero", "cond", "cyc", "worst", "all"}));

  Table1Options t1;
  app.add_subcommand("table1", "in-control steady-state ARL grid");

  Table2Options t2;
  auto* t2_cmd = app.add_subcommand("table2", "ARLs for lambda = 0.1 and p in {2, 3, 4, 10}");
  t2_cmd->add_flag("--calibrate", t2.calibrate, "calibrate thresholds instead of the published ones");
  t2_cmd->add_option("--target-arl", t2.target_arl, "in-control ARL used with --calibrate");

  ChartFlags map_chart;
  MapOptions map;
  std::string map_out;
  auto* map_cmd = app.add_subcommand("map", "ARL surface and stationary density on an (alpha, theta) grid");
  add_chart_flags(map_cmd, map_chart);
  map_cmd->add_option("--sqrt-delta", map.sqrt_delta, "shift size sqrt(delta)");
  map_cmd->add_option("--grid", map.grid, "points per axis")->check(CLI::Range(2, 2000));
  map_cmd->add_option("--out", map_out, "output csv path")->required();

  OptLambdaOptions opt;
  std::string criterion = "zero";
  std::string profile_out;
  auto* opt_cmd = app.add_subcommand("optlambda", "smoothing constant minimizing an out-of-control ARL");
  opt_cmd->add_option("--p", opt.p, "dimension")->required()->check(CLI::PositiveNumber);
  opt_cmd->add_option("--sqrt-delta", opt.sqrt_delta, "shift size sqrt(delta)")->required();
  opt_cmd->add_option("--target-arl", opt.target_arl, "in-control ARL")->required();
  opt_cmd->add_option("--criterion", criterion, "zero, cond, cyc or worst")
      ->check(CLI::IsMember({"zero", "cond", "cyc", "worst"}));
  opt_cmd->add_option("--lambda-min", opt.lambda_lo, "lower end of the search range");
  opt_cmd->add_option("--lambda-max", opt.lambda_hi, "upper end of the search range");
  opt_cmd->add_option("--profile", profile_out, "also write the ARL profile over lambda = 0.01..0.5 to this csv");

  ChartFlags mc_chart;
  McOptions mc;
  std::string mode = "zero";
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo ARL with the integral-equation value for comparison");
  add_chart_flags(mc_cmd, mc_chart);
  mc_cmd->add_option("--sqrt-delta", mc.sqrt_delta, "shift size sqrt(delta)");
  mc_cmd->add_option("--replications", mc.replications, "number of runs")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--seed", mc.seed, "generator seed");
  mc_cmd->add_option("--tau", mc.tau, "change point for cond/cyc")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--mode", mode, "zero, cond or cyc")->check(CLI::IsMember({"zero", "cond", "cyc"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    set_thread_count(threads);
    const Format format = parse_format(format_name);
    if (arl_cmd->parsed()) {
      arl.p = arl_chart.p;
      arl.lambda = arl_chart.lambda;
      arl.h4 = arl_chart.h4;
      arl.target_arl = arl_chart.target_arl;
      arl.r = r;
      emit(cmd_arl(arl), format);
    } else if (app.got_subcommand("table1")) {
      t1.r = r;
      emit(cmd_table1(t1), format);
    } else if (t2_cmd->parsed()) {
      t2.r = r;
      emit(cmd_table2(t2), format);
    } else if (map_cmd->parsed()) {
      map.p = map_chart.p;
      map.lambda = map_chart.lambda;
      map.h4 = map_chart.h4;
      map.target_arl = map_chart.target_arl;
      map.r = r;
      const auto result = cmd_map(map);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      write_text_file(map_out, result.table.render(Format::csv));
    } else if (opt_cmd->parsed()) {
      opt.criterion = parse_criterion(criterion);
      opt.r = r;
      emit(cmd_optlambda(opt), format);
      if (!profile_out.empty())
        write_text_file(profile_out, cmd_optlambda_profile(opt, default_profile_grid()).table.render(Format::csv));
    } else if (mc_cmd->parsed()) {
      mc.p = mc_chart.p;
      mc.lambda = mc_chart.lambda;
      mc.h4 = mc_chart.h4;
      mc.target_arl = mc_chart.target_arl;
      mc.mode = parse_simulation_mode(mode);
      mc.r = r;
      emit(cmd_mc(mc), format);
    }
  } catch (const std::exception& e) {
    std::cerr << "mewma-arl: error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
