#include "replen/valuation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace replen {
namespace {

void require_time(double t) {
  if (!(t >= 0.0)) throw std::domain_error("time must be nonnegative");
}

// alpha^k - 1 without cancellation for small r / mu.
double alpha_power_minus_one(int k, double r, double mu) {
  return std::expm1(k * std::log1p(r / mu));
}

}  // namespace

double payment(const CostSpec& cost, int k) {
  if (const auto* fixed = std::get_if<FixedCost>(&cost)) return fixed->theta;
  const auto& linear = std::get<LinearCost>(cost);
  return linear.b * k - linear.a;
}

EffectiveParams effective(const ModelParams& params) {
  if (params.k < 1) throw std::invalid_argument("stock size k must be >= 1");
  if (!(params.mu > 0.0) || !std::isfinite(params.mu)) {
    throw std::invalid_argument("demand rate mu must be positive");
  }
  if (!(params.r > 0.0) || !std::isfinite(params.r)) {
    throw std::invalid_argument("discount rate r must be positive");
  }
  if (!(params.growth >= 0.0)) {
    throw std::invalid_argument("cost growth rate must be nonnegative");
  }
  if (params.growth >= params.r) {
    throw std::invalid_argument("perpetual value divergent under cost growth");
  }
  if (const auto* linear = std::get_if<LinearCost>(&params.cost)) {
    if (!(linear->a >= 0.0)) throw std::invalid_argument("fixed cost a must be nonnegative");
    if (!(linear->b > 0.0)) throw std::invalid_argument("unit margin b must be positive");
  }
  const double theta = payment(params.cost, params.k);
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("non-positive replacement payoff");
  }

  EffectiveParams eff{};
  eff.k = params.k;
  eff.mu = params.mu;
  eff.theta = theta;
  eff.r_eff = params.r - params.growth;
  eff.alpha = eff.r_eff / params.mu + 1.0;
  eff.phi_k = std::exp(-params.k * std::log1p(eff.r_eff / params.mu));
  eff.rho = eff.r_eff * params.mu / (eff.r_eff + params.mu);
  eff.mu0 = params.k * (eff.r_eff + params.mu) / (params.mu * params.mu);
  eff.v = theta / alpha_power_minus_one(params.k, eff.r_eff, params.mu);
  return eff;
}

double perpetual_value(const ModelParams& params) { return effective(params).v; }

double series_value(const EffectiveParams& eff, double t, double tol) {
  require_time(t);
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  if (t == 0.0) return 0.0;

  const double x = eff.mu * t;
  const double tail_scale = eff.theta / (1.0 - eff.phi_k);
  double sum = 0.0;
  double power = eff.phi_k;  // phi_k^n
  for (int n = 1;; ++n) {
    sum += power * regularized_gamma_p(n * eff.k, x);
    power *= eff.phi_k;
    if (tail_scale * power < tol) break;
  }
  return eff.theta * sum;
}

double series_value(const ModelParams& params, double t, double tol) {
  return series_value(effective(params), t, tol);
}

double residual_value(const ModelParams& params, double t, double tol) {
  const EffectiveParams eff = effective(params);
  return eff.v - series_value(eff, t, tol);
}

double tail_weight(const ModelParams& params, double t) {
  require_time(t);
  const EffectiveParams eff = effective(params);
  return eff.v * gamma_sf(t, eff.law());
}

double asymptotic_coefficient(const EffectiveParams& eff) noexcept {
  return eff.theta * eff.mu / (eff.k * eff.r_eff);
}

double asymptotic_value(const ModelParams& params, double t) {
  require_time(t);
  const EffectiveParams eff = effective(params);
  return eff.v - asymptotic_coefficient(eff) * std::exp(-eff.rho * t);
}

double exact_k1_value(const ModelParams& params, double t) {
  if (params.k != 1) {
    throw std::invalid_argument("exact closed form is only available for k = 1");
  }
  require_time(t);
  const EffectiveParams eff = effective(params);
  return -(eff.theta * eff.mu / eff.r_eff) * std::expm1(-eff.rho * t);
}

OptimalStock optimal_stock(double a, double b, double mu, double r,
                           std::optional<int> k_max) {
  if (!(a >= 0.0)) throw std::invalid_argument("fixed cost a must be nonnegative");
  if (!(b > 0.0)) throw std::invalid_argument("unit margin b must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("demand rate mu must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("discount rate r must be positive");
  const int cap = k_max.value_or(kDefaultMaxStock);
  if (cap < 1) throw std::invalid_argument("k_max must be >= 1");

  // Smallest k with b k > a.
  const double ratio = std::floor(a / b);
  if (ratio >= cap) {
    throw std::invalid_argument("no feasible stock size: b k <= a for all k <= " +
                                std::to_string(cap));
  }
  int first = static_cast<int>(ratio) + 1;
  while (first > 1 && b * (first - 1) > a) --first;
  while (first <= cap && !(b * first > a)) ++first;
  if (first > cap) {
    throw std::invalid_argument("no feasible stock size: b k <= a for all k <= " +
                                std::to_string(cap));
  }

  OptimalStock best{first, 0.0, {}};
  for (int k = first; k <= cap; ++k) {
    const double denom = alpha_power_minus_one(k, r, mu);
    const double envelope = b * k / denom;
    const double value = (b * k - a) / denom;
    if (k > first && envelope <= best.v) break;
    best.scan.push_back({k, value});
    if (k == first || value > best.v) {
      best.k = k;
      best.v = value;
    }
  }
  return best;
}

}  // namespace replen
