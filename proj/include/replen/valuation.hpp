#pragma once

// Closed-form and series valuation of the expected discounted replenishment
// cost w_k(t) = E[W_k(t)] and its perpetual limit v_k.

#include <optional>
#include <variant>
#include <vector>

#include "replen/distributions.hpp"

namespace replen {

inline constexpr double kDefaultSeriesTol = 1e-9;

/// Constant payment per replenishment.
struct FixedCost {
  double theta;
};

/// Payment b*k - a: unit margin b on k items less a fixed order cost a.
struct LinearCost {
  double a;
  double b;
};

using CostSpec = std::variant<FixedCost, LinearCost>;

struct ModelParams {
  int k = 1;           ///< stock size (units replaced per order)
  double mu = 1.0;     ///< Poisson demand rate
  double r = 0.0;      ///< discount rate
  CostSpec cost = FixedCost{1.0};
  double growth = 0.0; ///< exponential cost inflation, must stay below r
};

/// Quantities derived once from ModelParams and shared by every method.
struct EffectiveParams {
  int k;
  double mu;
  double theta;  ///< payment per replenishment
  double r_eff;  ///< r - growth
  double alpha;  ///< r_eff / mu + 1
  double phi_k;  ///< E[e^{-r_eff X}] = alpha^{-k}; the defective kernel mass
  double rho;    ///< adjustment coefficient r_eff mu / (r_eff + mu)
  double mu0;    ///< mean of the exponentially tilted kernel
  double v;      ///< perpetual value theta phi_k / (1 - phi_k)

  GammaLaw law() const { return GammaLaw(k, mu); }
};

/// Validates `params` and derives every shared quantity.
/// Throws std::invalid_argument on invalid parameters, in particular when
/// growth >= r ("perpetual value divergent under cost growth") or the
/// payment per replenishment is not positive.
EffectiveParams effective(const ModelParams& params);

/// Replenishment payment theta for the cost specification at stock size k.
double payment(const CostSpec& cost, int k);

double perpetual_value(const ModelParams& params);

/// w_k(t) from the convolution series theta * sum_{n>=1} phi_k^n F^{*n}(t).
/// Truncated at the first N whose geometric tail bound
/// theta phi_k^{N+1} / (1 - phi_k) is below tol.
double series_value(const ModelParams& params, double t,
                    double tol = kDefaultSeriesTol);
double series_value(const EffectiveParams& eff, double t,
                    double tol = kDefaultSeriesTol);

/// J(t) = v_k - w_k(t).
double residual_value(const ModelParams& params, double t,
                      double tol = kDefaultSeriesTol);

/// j(t) = v_k (1 - F(t)), the forcing term of the residual renewal equation.
double tail_weight(const ModelParams& params, double t);

/// theta mu / (k r_eff): the limit of e^{rho t} J(t).
double asymptotic_coefficient(const EffectiveParams& eff) noexcept;

/// v_k - asymptotic_coefficient * e^{-rho t}. Not clamped; negative for
/// small t when the coefficient exceeds v_k.
double asymptotic_value(const ModelParams& params, double t);

/// Exact w_1(t) = (theta mu / r_eff)(1 - e^{-rho t}). Requires k == 1.
double exact_k1_value(const ModelParams& params, double t);

struct StockCandidate {
  int k;
  double v;
};

struct OptimalStock {
  int k;
  double v;
  std::vector<StockCandidate> scan;  ///< every k visited, ascending
};

inline constexpr int kDefaultMaxStock = 1'000'000;

/// Maximizes v_k = (b k - a) / (alpha^k - 1) over feasible k (b k > a).
/// The scan stops once the decreasing envelope b k / (alpha^k - 1) no longer
/// exceeds the incumbent; ties go to the smaller k.
/// Throws std::invalid_argument when no k <= k_max is feasible.
OptimalStock optimal_stock(double a, double b, double mu, double r,
                           std::optional<int> k_max = std::nullopt);

}  // namespace replen
