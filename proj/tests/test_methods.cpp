#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "replen/methods.hpp"
#include "replen/valuation.hpp"

using namespace replen;

namespace {

ModelParams table_params() {
  ModelParams p;
  p.k = 10;
  p.mu = 1.0;
  p.r = 0.02;
  p.cost = LinearCost{1.0, 1.0};
  return p;
}

ModelParams unit_k1() {
  ModelParams p;
  p.k = 1;
  p.mu = 1.0;
  p.r = 0.02;
  p.cost = FixedCost{1.0};
  return p;
}

CurveOptions with_mode(Execution mode, int threads = 0) {
  CurveOptions opts;
  opts.execution = {mode, threads};
  opts.mc.execution = {mode, threads};
  opts.mc.n_paths = 5000;
  opts.mc.seed = 8;
  return opts;
}

}  // namespace

TEST_CASE("method tags") {
  for (Method m : {Method::series, Method::volterra, Method::laplace, Method::asymptotic,
                   Method::exact_k1, Method::montecarlo}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK(to_string(Method::montecarlo) == "mc");
  CHECK(parse_method("montecarlo") == Method::montecarlo);
  CHECK_THROWS_AS(parse_method("all"), std::invalid_argument);
  CHECK_THROWS_AS(parse_method("Series"), std::invalid_argument);
}

TEST_CASE("uniform_times") {
  CHECK(uniform_times(1.0, 0.25) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(uniform_times(0.0, 1.0) == std::vector<double>{0.0});
  const auto times = uniform_times(500.0, 0.1);
  CHECK(times.size() == 5001);
  CHECK(times.back() == doctest::Approx(500.0));
  CHECK_THROWS(uniform_times(1.0, 0.0));
  CHECK_THROWS(uniform_times(-1.0, 0.1));
}

TEST_CASE("serial and parallel curves are bit-identical") {
  const std::vector<double> times = {0.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0};
  for (Method m : {Method::series, Method::laplace, Method::volterra, Method::asymptotic,
                   Method::montecarlo}) {
    CAPTURE(to_string(m));
    const ValueCurve ref = evaluate_curve(table_params(), m, times, with_mode(Execution::serial));
    for (int threads : {1, 2, 4}) {
      const ValueCurve par =
          evaluate_curve(table_params(), m, times, with_mode(Execution::parallel, threads));
      CHECK(par.values == ref.values);
      CHECK(par.std_errors == ref.std_errors);
      CHECK(par.times == ref.times);
    }
  }
}

TEST_CASE("curves per method") {
  const std::vector<double> times = {0.0, 10.0, 50.0};
  const ModelParams p = table_params();
  const ValueCurve series = evaluate_curve(p, Method::series, times);
  CHECK(series.method == Method::series);
  CHECK(series.values[0] == 0.0);
  CHECK(series.values[1] == series_value(p, 10.0, kDefaultSeriesTol));
  CHECK(series.std_errors.empty());

  const ValueCurve mc = evaluate_curve(p, Method::montecarlo, times, with_mode(Execution::serial));
  CHECK(mc.values[0] == 0.0);
  CHECK(mc.std_errors.size() == 3);
  CHECK(mc.std_errors[0] == 0.0);
  CHECK(mc.std_errors[1] > 0.0);

  const ValueCurve asym = evaluate_curve(p, Method::asymptotic, times);
  CHECK(asym.values[0] < 0.0);

  CHECK_THROWS_AS(evaluate_curve(p, Method::exact_k1, times), std::invalid_argument);
  CHECK_NOTHROW(evaluate_curve(unit_k1(), Method::exact_k1, times));
}

TEST_CASE("time validation") {
  const ModelParams p = table_params();
  const std::vector<double> descending = {1.0, 0.5};
  const std::vector<double> repeated = {1.0, 1.0};
  const std::vector<double> negative = {-1.0, 1.0};
  const std::vector<double> off_grid = {0.0, 0.005, 1.0};
  CHECK_THROWS_AS(evaluate_curve(p, Method::series, descending), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_curve(p, Method::series, repeated), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_curve(p, Method::series, negative), std::domain_error);
  CHECK_THROWS_AS(evaluate_curve(p, Method::volterra, off_grid), std::invalid_argument);
  CurveOptions coarse;
  coarse.volterra_h = 0.5;
  const std::vector<double> on_grid = {0.0, 0.5, 3.0};
  CHECK(evaluate_curve(p, Method::volterra, on_grid, coarse).values.size() == 3);

  SUBCASE("worker errors keep their type") {
    CurveOptions opts = with_mode(Execution::parallel, 2);
    opts.series_tol = -1.0;
    const std::vector<double> times = {1.0, 2.0};
    CHECK_THROWS_AS(evaluate_curve(p, Method::series, times, opts), std::domain_error);
  }
}

TEST_CASE("compare_methods") {
  const std::vector<double> times = {0.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0};
  const MethodComparison cmp = compare_methods(table_params(), times, false);
  CHECK(cmp.analytic.size() == 3);
  CHECK(!cmp.montecarlo);
  CHECK(cmp.max_discrepancy.size() == times.size());
  CHECK(cmp.max_discrepancy[0] == 0.0);
  CHECK(cmp.analytic_agree(1e-4));
  CHECK(!cmp.analytic_agree(1e-12));
  CHECK(cmp.max_mc_z_score() == 0.0);

  const std::vector<double> k1_times = {0.0, 5.0, 50.0};
  CurveOptions opts;
  opts.mc.n_paths = 2000;
  const MethodComparison k1 = compare_methods(unit_k1(), k1_times, true, opts);
  CHECK(k1.analytic.size() == 4);
  CHECK(k1.analytic.back().method == Method::exact_k1);
  REQUIRE(k1.montecarlo);
  CHECK(k1.montecarlo->values.size() == 3);
  CHECK(k1.max_mc_z_score() >= 0.0);
}
