#include "mewma/cli/commands.hpp"
#include "mewma/cli/output_table.hpp"
#include "mewma/outofcontrol.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

using namespace mewma;
using namespace mewma::cli;

namespace {

// Index of the first row whose numeric columns match all (name, value) pairs.
std::size_t find_row(const OutputTable& t, std::initializer_list<std::pair<const char*, double>> keys) {
  for (std::size_t i = 0; i < t.rows().size(); ++i) {
    bool ok = true;
    for (const auto& [name, v] : keys) ok = ok && std::abs(t.number(i, name) - v) < 1e-9;
    if (ok) return i;
  }
  throw std::out_of_range("row not found");
}

}  // namespace

TEST_CASE("csv output round-trips exactly") {
  OutputTable t({{"name", ColumnKind::text}, {"n", ColumnKind::integer}, {"x", ColumnKind::real}});
  t.add_row({std::string("a,b \"q\""), 3.0, 0.1});
  t.add_row({std::string("plain"), -7.0, 1.0 / 3.0});
  const auto back = OutputTable::parse_csv(t.render(Format::csv));
  REQUIRE(back.rows().size() == 2);
  CHECK(back.headers() == t.headers());
  CHECK(std::get<std::string>(back.rows()[0][0]) == "a,b \"q\"");
  CHECK(back.number(0, "x") == 0.1);
  CHECK(back.number(1, "x") == 1.0 / 3.0);
  CHECK(back.number(1, "n") == -7.0);
}

TEST_CASE("plain formatting") {
  OutputTable t({{"arl", ColumnKind::arl}, {"n", ColumnKind::integer}});
  t.add_row({200.5443, 12.0});
  t.add_row({9.68061, 3.0});
  const std::string s = t.render(Format::plain);
  CHECK(s.find("200.5") != std::string::npos);
  CHECK(s.find("200.54") == std::string::npos);
  CHECK(s.find("9.68") != std::string::npos);
  CHECK(s.find("9.681") == std::string::npos);
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(t.number(0, "missing"), std::out_of_range);
  CHECK(parse_format("csv") == Format::csv);
  CHECK_THROWS_AS(parse_format("json"), std::invalid_argument);
}

TEST_CASE("arl command") {
  ArlOptions o;
  o.p = 2;
  o.h4 = 8.64;
  o.sqrt_delta = {0.0, 1.0};
  const auto res = cmd_arl(o);
  const auto& t = res.table;
  const auto i0 = find_row(t, {{"sqrt_delta", 0.0}});
  const auto i1 = find_row(t, {{"sqrt_delta", 1.0}});
  CHECK(std::abs(t.number(i0, "zero") - 200.54) <= 0.01);
  CHECK(std::abs(t.number(i1, "zero") - 10.13) <= 0.01);
  CHECK(std::abs(t.number(i1, "cond") - 9.68) <= 0.01);
  CHECK(std::abs(t.number(i1, "cyc") - 9.69) <= 0.01);

  ArlOptions c;
  c.p = 4;
  c.target_arl = 200.0;
  c.sqrt_delta = {0.0};
  c.type = "zero";
  const auto cal = cmd_arl(c).table;
  CHECK(cal.number(0, "zero") == doctest::Approx(200.0).epsilon(1e-5));

  ArlOptions both = o;
  both.target_arl = 200.0;
  CHECK_THROWS_AS(cmd_arl(both), std::invalid_argument);
  ArlOptions none;
  CHECK_THROWS_AS(cmd_arl(none), std::invalid_argument);
  ArlOptions bad = o;
  bad.type = "median";
  CHECK_THROWS_AS(cmd_arl(bad), std::invalid_argument);
}

TEST_CASE("table1 command") {
  const auto t = cmd_table1({}).table;
  CHECK(t.rows().size() == 21);
  const auto i = find_row(t, {{"lambda", 0.1}, {"p", 5.0}});
  CHECK(std::abs(t.number(i, "cond") - 190.9) <= 0.1);
  for (std::size_t k = 0; k < t.rows().size(); ++k) CHECK(t.number(k, "zero") == doctest::Approx(200.0).epsilon(1e-5));
}

TEST_CASE("table2 thresholds and a cell") {
  CHECK(table2_threshold(2) == 8.64);
  CHECK(table2_threshold(3) == 10.784);
  CHECK(table2_threshold(4) == 12.73);
  CHECK(table2_threshold(10) == 22.67);
  CHECK_THROWS_AS(table2_threshold(5), std::invalid_argument);
  ArlOptions o;
  o.p = 4;
  o.h4 = table2_threshold(4);
  o.sqrt_delta = {2.0};
  o.type = "cyc";
  CHECK(std::abs(cmd_arl(o).table.number(0, "cyc") - 4.80) <= 0.01);
}

TEST_CASE("map command") {
  for (int p : {2, 10}) {
    MapOptions o;
    o.p = p;
    o.target_arl = 200.0;
    o.grid = 41;
    const auto t = cmd_map(o).table;
    REQUIRE(t.rows().size() == 41u * 41u);
    const double h = t.number(t.rows().size() - 1, "alpha");
    const double da = h / 40.0;
    const double dt = std::numbers::pi / 40.0;
    double mass = 0.0;
    double best = -1.0;
    double alpha_best = 0.0;
    for (std::size_t k = 0; k < t.rows().size(); ++k) {
      const double a = t.number(k, "alpha");
      const double th = t.number(k, "theta");
      const double wa = (a == 0.0 || std::abs(a - h) < 1e-12) ? 0.5 : 1.0;
      const double wt = (th == 0.0 || std::abs(th - std::numbers::pi) < 1e-12) ? 0.5 : 1.0;
      const double psi = t.number(k, "psi");
      mass += wa * wt * psi * da * dt;
      if (psi > best) {
        best = psi;
        alpha_best = a;
      }
      // At the origin the angle is meaningless.
      if (a == 0.0) CHECK(t.number(k, "L") == doctest::Approx(t.number(0, "L")).epsilon(1e-9));
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(2e-2));
    if (p == 2)
      CHECK(alpha_best == 0.0);
    else
      CHECK(alpha_best > 0.0);
  }
}

TEST_CASE("optlambda command") {
  OptLambdaOptions o;
  o.p = 4;
  o.target_arl = 500.0;
  o.r = 20;
  const auto res = cmd_optlambda(o);
  CHECK(std::abs(res.table.number(0, "lambda_opt") - 0.104) <= 2e-3);
  CHECK(res.warnings.empty());
  o.lambda_hi = 0.05;
  const auto edge = cmd_optlambda(o);
  CHECK_FALSE(edge.warnings.empty());
  const auto prof = cmd_optlambda_profile(o, {0.05, 0.1, 0.2});
  CHECK(prof.table.rows().size() == 3);
  CHECK(default_profile_grid().size() == 50);
}

TEST_CASE("mc command") {
  McOptions o;
  o.p = 2;
  o.h4 = 8.64;
  o.replications = 50000;
  const auto a = cmd_mc(o);
  const auto b = cmd_mc(o);
  CHECK(std::abs(a.table.number(0, "z")) <= 3.0);
  CHECK(a.table.number(0, "mc_mean") == b.table.number(0, "mc_mean"));
  o.mode = SimulationMode::conditional;
  o.tau = 20;
  o.replications = 2000;
  CHECK_FALSE(cmd_mc(o).warnings.empty());
}

TEST_CASE("unwritable output path") {
  CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x.csv", "a\n"), std::runtime_error);
}
