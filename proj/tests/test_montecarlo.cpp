#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "replen/montecarlo.hpp"
#include "replen/valuation.hpp"

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

ModelParams table_params() {
  ModelParams p;
  p.k = 10;
  p.mu = 1.0;
  p.r = 0.02;
  p.cost = LinearCost{1.0, 1.0};
  return p;
}

MCOptions options(std::uint64_t paths, std::uint64_t seed, Execution mode = Execution::serial,
                  int threads = 0) {
  MCOptions opts;
  opts.n_paths = paths;
  opts.seed = seed;
  opts.execution = {mode, threads};
  return opts;
}

bool within(const MCEstimate& est, double target, double sigmas = 4.0) {
  return std::abs(est.mean - target) < sigmas * est.std_error;
}

}  // namespace

TEST_CASE("simulate_wk against the discounted cost expectation") {
  const MCEstimate table = simulate_wk(table_params(), 10.0, options(1'000'000, 11, Execution::parallel));
  CHECK(within(table, oracle::discounted_cost_oracle(10, 1.0, 0.02, 9.0, 10.0, 60)));
  CHECK(table.n_paths == 1'000'000);
  CHECK(table.seed == 11);
  CHECK(table.truncation_bias_bound == 0.0);

  const ModelParams k1 = fixed(1, 1.0, 0.02, 1.0);
  const MCEstimate est = simulate_wk(k1, 50.0, options(1'000'000, 12, Execution::parallel));
  CHECK(within(est, 50.0 * (1.0 - std::exp(-1.0))));
  CHECK(within(est, oracle::discounted_cost_oracle(1, 1.0, 0.02, 1.0, 50.0, 400)));
}

// The renewal equation with kernel phi_k f(s) discounts every payment by the
// full-cycle factor phi_k regardless of whether the cycle ended before t. The
// simulated process discounts by the actual epoch, which is larger on
// {S_n <= t}, so at finite horizons the simulation sits above the series and
// the two meet only as t grows.
TEST_CASE("simulated cost exceeds the renewal-equation series at finite horizons") {
  const ModelParams p = table_params();
  const std::vector<double> horizons = {10.0, 50.0, 500.0};
  const auto est = simulate_wk_grid(p, horizons, options(200'000, 13, Execution::parallel));
  CHECK(est[0].mean - series_value(p, 10.0) > 10.0 * est[0].std_error);
  CHECK(est[1].mean - series_value(p, 50.0) > 10.0 * est[1].std_error);
  CHECK(within(est[2], series_value(p, 500.0)));
}

TEST_CASE("no renewals before a tiny horizon") {
  const MCEstimate est = simulate_wk(table_params(), 1e-6, options(100'000, 3));
  CHECK(est.mean == 0.0);
  CHECK(est.std_error == 0.0);
}

TEST_CASE("simulate_vk") {
  const MCEstimate unit = simulate_vk(fixed(1, 1.0, 1.0, 1.0), options(1'000'000, 5, Execution::parallel));
  CHECK(within(unit, 1.0));
  CHECK(unit.truncation_bias_bound == doctest::Approx(1e-12));

  const ModelParams p = table_params();
  const MCEstimate table = simulate_vk(p, options(200'000, 6, Execution::parallel));
  CHECK(within(table, 41.097));
  CHECK(table.mean <= perpetual_value(p) + 5.0 * table.std_error);
  CHECK(table.truncation_bias_bound == doctest::Approx(1e-12 * perpetual_value(p)));

  const MCEstimate loose = simulate_vk(p, options(20'000, 6), 1e-3);
  CHECK(loose.truncation_bias_bound == doctest::Approx(1e-3 * perpetual_value(p)));
}

TEST_CASE("determinism and serial/parallel bit identity") {
  const ModelParams p = table_params();
  const std::vector<double> horizons = {0.5, 10.0, 20.0, 50.0};
  const std::uint64_t paths = 3 * kPathBlock + 123;  // partial final block

  const MCEstimate vk_ref = simulate_vk(p, options(paths, 77));
  CHECK(simulate_vk(p, options(paths, 77)) == vk_ref);
  CHECK(!(simulate_vk(p, options(paths, 78)) == vk_ref));
  const auto grid_ref = simulate_wk_grid(p, horizons, options(paths, 77));
  const PerpetuityCheck check_ref = verify_perpetuity_equation(p, options(paths, 77));

  for (int threads : {1, 2, 4}) {
    CAPTURE(threads);
    const MCOptions par = options(paths, 77, Execution::parallel, threads);
    CHECK(simulate_vk(p, par) == vk_ref);
    CHECK(simulate_wk_grid(p, horizons, par) == grid_ref);
    const PerpetuityCheck check = verify_perpetuity_equation(p, par);
    CHECK(check.lhs == check_ref.lhs);
    CHECK(check.rhs == check_ref.rhs);
  }
}

TEST_CASE("grid entries equal single-horizon runs") {
  const ModelParams p = fixed(3, 1.5, 0.05, 2.0);
  const std::vector<double> horizons = {1.0, 4.0, 30.0};
  const auto grid = simulate_wk_grid(p, horizons, options(10'000, 9));
  REQUIRE(grid.size() == horizons.size());
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    CHECK(grid[i] == simulate_wk(p, horizons[i], options(10'000, 9)));
  }
  CHECK(grid[0].mean <= grid[1].mean);
  CHECK(grid[1].mean <= grid[2].mean);
}

TEST_CASE("perpetuity equation") {
  const PerpetuityCheck unit = verify_perpetuity_equation(fixed(1, 1.0, 1.0, 1.0),
                                                          options(200'000, 21, Execution::parallel));
  CHECK(unit.agrees());
  CHECK(unit.rhs.std_error > 0.0);
  CHECK(std::abs(unit.lhs.mean - 1.0) < 0.02);
  CHECK(std::abs(unit.rhs.mean - 1.0) < 0.02);

  const PerpetuityCheck table = verify_perpetuity_equation(table_params(),
                                                           options(100'000, 22, Execution::parallel));
  CHECK(table.agrees());
  CHECK(table.rhs.std_error > 0.0);
  CHECK(within(table.lhs, 41.097));
  CHECK(table.combined_std_error() ==
        doctest::Approx(std::hypot(table.lhs.std_error, table.rhs.std_error)));
}

TEST_CASE("path samples are nonnegative and ordered") {
  const EffectiveParams eff = effective(table_params());
  const std::vector<double> horizons = {1.0, 10.0, 100.0};
  std::vector<double> out(horizons.size());
  for (std::uint64_t path = 0; path < 5000; ++path) {
    RandomStream stream = RandomStream::substream(4, path);
    sample_cost_path(eff, horizons, stream, out);
    CHECK(out[0] >= 0.0);
    CHECK(out[0] <= out[1]);
    CHECK(out[1] <= out[2]);
    RandomStream tail = RandomStream::substream(4, path, 1);
    CHECK(sample_perpetuity_path(eff, 1e-6, tail) >= 0.0);
  }
}

TEST_CASE("standard error scales as one over root n") {
  const ModelParams p = fixed(2, 1.0, 0.1, 1.0);
  const double small = simulate_wk(p, 20.0, options(20'000, 31)).std_error;
  const double large = simulate_wk(p, 20.0, options(80'000, 32)).std_error;
  const double ratio = small / large;
  CHECK(ratio > 2.0 * 0.8);
  CHECK(ratio < 2.0 * 1.2);
}

TEST_CASE("input validation") {
  const ModelParams p = table_params();
  CHECK_THROWS_AS(simulate_wk(p, 0.0, options(100, 1)), std::domain_error);
  CHECK_THROWS_AS(simulate_wk(p, 1.0, options(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(simulate_vk(p, options(100, 1), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(simulate_vk(p, options(100, 1), 1.5), std::invalid_argument);
  const std::vector<double> descending = {2.0, 1.0};
  CHECK_THROWS_AS(simulate_wk_grid(p, descending, options(100, 1)), std::invalid_argument);
  CHECK_THROWS_AS(simulate_wk(fixed(1, 1.0, 0.02, -1.0), 1.0, options(100, 1)),
                  std::invalid_argument);
}
