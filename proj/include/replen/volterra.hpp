#pragma once

// Direct solution of the defective renewal equation
//   w(t) = theta phi_k F(t) + int_0^t w(t - s) phi_k f(s) ds
// by trapezoidal product quadrature on a uniform grid.

#include "replen/curve.hpp"
#include "replen/valuation.hpp"

namespace replen {

inline constexpr double kDefaultVolterraStep = 0.01;

struct GridSpec {
  double t_max;
  double h = kDefaultVolterraStep;

  /// Number of steps t_max / h; throws std::invalid_argument unless it is an
  /// integer >= 2 (relative rounding slack 1e-9).
  int steps() const;
};

/// Values on t_i = i h, i = 0..steps. Global error O(h^2).
/// Kernel weights are exact moments of the kernel against piecewise-linear
/// interpolants of w; the diagonal term is solved implicitly.
ValueCurve solve_renewal(const ModelParams& params, const GridSpec& grid);

}  // namespace replen
