#pragma once

// Evaluation of w_k(t) on a time grid by any method, and cross-method
// comparison.

#include <optional>
#include <span>
#include <vector>

#include "replen/curve.hpp"
#include "replen/execution.hpp"
#include "replen/laplace.hpp"
#include "replen/montecarlo.hpp"
#include "replen/valuation.hpp"
#include "replen/volterra.hpp"

namespace replen {

struct CurveOptions {
  double series_tol = kDefaultSeriesTol;
  double volterra_h = kDefaultVolterraStep;
  InversionConfig inversion{};
  MCOptions mc{};
  double tail_tol = kDefaultTailTol;
  /// Per-time kernels (series, laplace) run one time point per work item.
  ExecutionPolicy execution{};
};

/// `times` must be nonnegative and strictly ascending. For the Volterra
/// method every time must lie on the h grid.
ValueCurve evaluate_curve(const ModelParams& params, Method method,
                          std::span<const double> times,
                          const CurveOptions& opts = {});

struct MethodComparison {
  std::vector<double> times;
  std::vector<ValueCurve> analytic;  ///< series, volterra, laplace (+ exact_k1 when k = 1)
  std::optional<ValueCurve> montecarlo;
  /// Largest pairwise |difference| among the analytic curves at each time.
  std::vector<double> max_discrepancy;

  double max_analytic_discrepancy() const;
  /// Largest |mc - series| / stderr over times with nonzero stderr.
  double max_mc_z_score() const;
  bool analytic_agree(double tol) const { return max_analytic_discrepancy() < tol; }
  bool montecarlo_agree(double sigmas) const;
};

MethodComparison compare_methods(const ModelParams& params,
                                 std::span<const double> times, bool with_mc,
                                 const CurveOptions& opts = {});

/// 0, step, 2 step, ... up to and including t_max (within rounding).
std::vector<double> uniform_times(double t_max, double step);

}  // namespace replen
