#include "mewma/calibrate.hpp"
#include "mewma/errors.hpp"
#include "mewma/incontrol.hpp"
#include "mewma/outofcontrol.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace mewma;

TEST_CASE("criterion names round-trip") {
  for (auto c : {Criterion::zero_state, Criterion::conditional_steady, Criterion::cyclical_steady,
                 Criterion::worst_case})
    CHECK(parse_criterion(to_string(c)) == c);
  CHECK(parse_criterion("zero") == Criterion::zero_state);
  CHECK(parse_criterion("cond") == Criterion::conditional_steady);
  CHECK(parse_criterion("cyc") == Criterion::cyclical_steady);
  CHECK(parse_criterion("worst") == Criterion::worst_case);
  CHECK_THROWS_AS(parse_criterion("median"), std::invalid_argument);
}

TEST_CASE("calibrated thresholds for E_inf = 200 at lambda = 0.1") {
  CalibrationTarget t;
  CHECK(calibrate_h4(2, 0.1, t) == doctest::Approx(8.6336).epsilon(2e-5));
  CHECK(std::abs(calibrate_h4(3, 0.1, t) - 10.784) <= 1e-3);
  CHECK(std::abs(calibrate_h4(4, 0.1, t) - 12.73) <= 1e-2);
  CHECK(std::abs(calibrate_h4(10, 0.1, t) - 22.66) <= 5e-3);
}

TEST_CASE("calibration inverts the zero-state ARL") {
  for (int p : {2, 5, 20}) {
    for (double lambda : {0.05, 0.3}) {
      for (double target : {50.0, 500.0}) {
        CalibrationTarget t;
        t.target_arl = target;
        const double h4 = calibrate_h4(p, lambda, t);
        const double L = zero_state_arl_incontrol(ChartConfig(p, lambda, h4)).refined(0.0);
        CHECK(L == doctest::Approx(target).epsilon(2.0 * t.tolerance));
      }
    }
  }
}

TEST_CASE("lambda = 1 reduces to the chi-squared quantile") {
  // With lambda = 1 the ARL is 1 / P(chi2(p) > h4).
  for (int p : {2, 4, 10}) {
    const boost::math::chi_squared chi(p);
    const double q = boost::math::quantile(boost::math::complement(chi, 1.0 / 200.0));
    CalibrationTarget t;
    CHECK(calibrate_h4(p, 1.0, t) == doctest::Approx(q).epsilon(1e-6));
    CHECK(calibrate_hotelling_h4(p, 200.0) == doctest::Approx(q).epsilon(1e-12));
  }
  CHECK(calibrate_hotelling_h4(2, 200.0) == doctest::Approx(-2.0 * std::log(0.005)).epsilon(1e-12));
}

TEST_CASE("Hotelling out-of-control ARLs") {
  const double expected[] = {41.9, 52.4, 61.0, 92.5};
  const int dims[] = {2, 3, 4, 10};
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(hotelling_arl(dims[i], calibrate_hotelling_h4(dims[i], 200.0), 1.0) - expected[i]) <= 0.05);
}

TEST_CASE("calibration argument errors") {
  CalibrationTarget t;
  t.criterion = Criterion::worst_case;
  CHECK_THROWS_AS(calibrate_h4(2, 0.1, t), std::invalid_argument);
  CalibrationTarget low;
  low.target_arl = 1.0;
  CHECK_THROWS_AS(calibrate_h4(2, 0.1, low), std::invalid_argument);
  CalibrationTarget huge;
  huge.target_arl = 1e20;
  CHECK_THROWS_AS(calibrate_h4(2, 0.1, huge), SolverError);
  CHECK_THROWS_AS(calibrate_hotelling_h4(2, 0.5), std::invalid_argument);
}

TEST_CASE("criterion_arl dispatches to the matching ARL") {
  const ChartConfig cfg(2, 0.1, 8.64);
  const ShiftSpec s(1.0);
  const auto ss = steady_state_arl(cfg, s);
  CHECK(criterion_arl(cfg, s, Criterion::zero_state) == doctest::Approx(ss.L00).epsilon(1e-12));
  CHECK(criterion_arl(cfg, s, Criterion::conditional_steady) == doctest::Approx(ss.D).epsilon(1e-12));
  CHECK(criterion_arl(cfg, s, Criterion::cyclical_steady) == doctest::Approx(ss.Dstar).epsilon(1e-12));
  CHECK(criterion_arl(cfg, s, Criterion::worst_case) == doctest::Approx(ss.W).epsilon(1e-9));
}

TEST_CASE("optimal lambda is a minimum of the profile") {
  CalibrationTarget t;
  t.target_arl = 500.0;
  const auto opt = optimal_lambda(4, 1.0, t, 20);
  CHECK(std::abs(opt.lambda - 0.104) <= 2e-3);
  CHECK_FALSE(opt.boundary);
  CHECK_FALSE(opt.nonconvex);
  const auto prof = lambda_profile(4, 1.0, t, {opt.lambda - 0.02, opt.lambda + 0.02}, 20);
  for (const auto& pt : prof) CHECK(pt.arl > opt.arl);
  CHECK(zero_state_arl_incontrol(ChartConfig(4, opt.lambda, opt.h4), 20).refined(0.0) ==
        doctest::Approx(500.0).epsilon(2e-6));
}

TEST_CASE("worst-case optimum uses more smoothing weight than the steady-state one") {
  CalibrationTarget cond;
  cond.criterion = Criterion::conditional_steady;
  CalibrationTarget worst;
  worst.criterion = Criterion::worst_case;
  const auto a = optimal_lambda(2, 1.0, cond, 20);
  const auto b = optimal_lambda(2, 1.0, worst, 20);
  CHECK(b.lambda > a.lambda);
  CHECK(b.arl > a.arl);
}

TEST_CASE("optimal_lambda arguments") {
  CalibrationTarget t;
  CHECK_THROWS_AS(optimal_lambda(2, 0.0, t), std::invalid_argument);
  CHECK_THROWS_AS(optimal_lambda(2, 1.0, t, 20, 0.001, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(optimal_lambda(2, 1.0, t, 20, 0.3, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(optimal_lambda(2, 1.0, t, 20, 0.1, 1.5), std::invalid_argument);
}
