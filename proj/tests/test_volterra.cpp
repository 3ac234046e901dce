#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "replen/valuation.hpp"
#include "replen/volterra.hpp"

using namespace replen;

namespace {

ModelParams fixed(int k, double mu, double r, double theta) {
  ModelParams p;
  p.k = k;
  p.mu = mu;
  p.r = r;
  p.cost = FixedCost{theta};
  return p;
}

double max_error_vs_exact(const ModelParams& p, double t_max, double h) {
  const ValueCurve curve = solve_renewal(p, {t_max, h});
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    worst = std::max(worst, std::abs(curve.values[i] - exact_k1_value(p, curve.times[i])));
  }
  return worst;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK(GridSpec{10.0, 0.01}.steps() == 1000);
  CHECK(GridSpec{0.3, 0.1}.steps() == 3);
  CHECK(GridSpec{1.0, 0.5}.steps() == 2);
  CHECK_THROWS_AS((GridSpec{1.0, 0.75}.steps()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{1.0, 1.0}.steps()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{0.0, 0.1}.steps()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{1.0, -0.1}.steps()), std::invalid_argument);
  CHECK_THROWS_AS((solve_renewal(fixed(1, 1.0, 0.02, 1.0), {1.0, 0.3})), std::invalid_argument);
}

TEST_CASE("curve layout") {
  const ValueCurve curve = solve_renewal(fixed(3, 2.0, 0.1, 1.0), {2.0, 0.25});
  REQUIRE(curve.times.size() == 9);
  CHECK(curve.method == Method::volterra);
  CHECK(curve.std_errors.empty());
  CHECK(curve.times.front() == 0.0);
  CHECK(curve.values.front() == 0.0);
  CHECK(curve.times.back() == 2.0);
  CHECK_NOTHROW(curve.validate());
}

TEST_CASE("k = 1 against the closed form") {
  const ModelParams p = fixed(1, 1.0, 0.02, 1.0);
  const double coarse = max_error_vs_exact(p, 500.0, 0.05);
  const double fine = max_error_vs_exact(p, 500.0, 0.025);
  CHECK(coarse < 1e-4);
  const double ratio = coarse / fine;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("reference example at t = 10") {
  ModelParams p;
  p.k = 10;
  p.mu = 1.0;
  p.r = 0.02;
  p.cost = LinearCost{1.0, 1.0};
  const ValueCurve curve = solve_renewal(p, {10.0, 0.01});
  const double oracle_value = oracle::series_oracle(10, 1.0, 0.02, 9.0, 10.0, 60);
  CHECK(std::abs(curve.values.back() - 4.023) < 1e-3);
  CHECK(std::abs(curve.values.back() - oracle_value) < 1e-6);
}

TEST_CASE("nondecreasing, bounded by v, and close to the series") {
  for (const ModelParams& p : {fixed(10, 1.0, 0.02, 9.0), fixed(2, 1.0, 0.05, 1.0),
                               fixed(1, 3.0, 0.3, 2.0), fixed(25, 4.0, 0.1, 1.0)}) {
    const double h = 0.02;
    const ValueCurve curve = solve_renewal(p, {100.0, h});
    const double v = perpetual_value(p);
    double worst = 0.0;
    for (std::size_t i = 1; i < curve.values.size(); ++i) {
      CHECK(curve.values[i] >= curve.values[i - 1]);
      CHECK(curve.values[i] <= v + 10.0 * h * h);
      if (i % 50 == 0) {
        worst = std::max(worst,
                         std::abs(curve.values[i] - series_value(p, curve.times[i], 1e-12)));
      }
    }
    CHECK(worst < std::max(10.0 * h * h, 1e-6));
  }
}
