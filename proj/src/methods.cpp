#include "replen/methods.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace replen {
namespace {

void validate_times(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) {
      throw std::domain_error("times must be finite and nonnegative");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("times must be strictly ascending");
    }
  }
}

template <class Fn>
std::vector<double> map_times(std::span<const double> times,
                              const ExecutionPolicy& policy, Fn fn) {
  std::vector<double> values(times.size());
  if (policy.mode == Execution::serial) {
    for (std::size_t i = 0; i < times.size(); ++i) values[i] = fn(times[i]);
    return values;
  }
  const int threads = policy.threads > 0 ? policy.threads : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(times.size());
  // Exceptions may not cross the parallel region.
  std::vector<std::exception_ptr> errors(times.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      values[i] = fn(times[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return values;
}

std::vector<double> volterra_values(const ModelParams& params,
                                    std::span<const double> times, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("volterra step must be positive");
  std::vector<double> values(times.size(), 0.0);
  if (times.empty() || times.back() == 0.0) return values;

  const int steps = std::max(2, static_cast<int>(std::ceil(times.back() / h - 1e-9)));
  const ValueCurve grid = solve_renewal(params, GridSpec{steps * h, h});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double index = std::round(times[i] / h);
    if (std::abs(index * h - times[i]) > 1e-9 * std::max(times[i], h)) {
      throw std::invalid_argument("time " + std::to_string(times[i]) +
                                  " is not on the volterra grid");
    }
    values[i] = grid.values.at(static_cast<std::size_t>(index));
  }
  return values;
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::series: return "series";
    case Method::volterra: return "volterra";
    case Method::laplace: return "laplace";
    case Method::asymptotic: return "asymptotic";
    case Method::exact_k1: return "exact_k1";
    case Method::montecarlo: return "mc";
  }
  return "unknown";
}

Method parse_method(std::string_view tag) {
  if (tag == "series") return Method::series;
  if (tag == "volterra") return Method::volterra;
  if (tag == "laplace") return Method::laplace;
  if (tag == "asymptotic") return Method::asymptotic;
  if (tag == "exact_k1") return Method::exact_k1;
  if (tag == "mc" || tag == "montecarlo") return Method::montecarlo;
  throw std::invalid_argument("unknown method '" + std::string(tag) + "'");
}

void ValueCurve::validate() const {
  if (times.size() != values.size()) throw std::logic_error("curve length mismatch");
  if (!std_errors.empty() && std_errors.size() != times.size()) {
    throw std::logic_error("curve stderr length mismatch");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw std::logic_error("curve times not ascending");
  }
}

ValueCurve evaluate_curve(const ModelParams& params, Method method,
                          std::span<const double> times, const CurveOptions& opts) {
  validate_times(times);
  const EffectiveParams eff = effective(params);

  ValueCurve curve;
  curve.method = method;
  curve.times.assign(times.begin(), times.end());

  switch (method) {
    case Method::series:
      curve.values = map_times(times, opts.execution, [&](double t) {
        return series_value(eff, t, opts.series_tol);
      });
      break;
    case Method::volterra:
      curve.values = volterra_values(params, times, opts.volterra_h);
      break;
    case Method::laplace:
      curve.values = map_times(times, opts.execution, [&](double t) {
        return invert_or_zero(params, t, opts.inversion);
      });
      break;
    case Method::asymptotic:
      for (double t : times) curve.values.push_back(asymptotic_value(params, t));
      break;
    case Method::exact_k1:
      for (double t : times) curve.values.push_back(exact_k1_value(params, t));
      break;
    case Method::montecarlo: {
      // W_k(0) = 0 on every path.
      const auto first_positive = std::upper_bound(times.begin(), times.end(), 0.0);
      const std::span<const double> horizons(first_positive, times.end());
      const auto estimates = simulate_wk_grid(params, horizons, opts.mc);
      const std::size_t zeros = times.size() - horizons.size();
      curve.values.assign(zeros, 0.0);
      curve.std_errors.assign(zeros, 0.0);
      for (const auto& est : estimates) {
        curve.values.push_back(est.mean);
        curve.std_errors.push_back(est.std_error);
      }
      break;
    }
  }
  curve.validate();
  return curve;
}

double MethodComparison::max_analytic_discrepancy() const {
  double worst = 0.0;
  for (double d : max_discrepancy) worst = std::max(worst, d);
  return worst;
}

double MethodComparison::max_mc_z_score() const {
  if (!montecarlo || analytic.empty()) return 0.0;
  const ValueCurve& series = analytic.front();
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double se = montecarlo->std_errors[i];
    const double diff = std::abs(montecarlo->values[i] - series.values[i]);
    if (se > 0.0) {
      worst = std::max(worst, diff / se);
    } else if (diff > 0.0) {
      worst = std::max(worst, std::numeric_limits<double>::infinity());
    }
  }
  return worst;
}

bool MethodComparison::montecarlo_agree(double sigmas) const {
  return max_mc_z_score() < sigmas;
}

MethodComparison compare_methods(const ModelParams& params,
                                 std::span<const double> times, bool with_mc,
                                 const CurveOptions& opts) {
  MethodComparison cmp;
  cmp.times.assign(times.begin(), times.end());
  for (Method m : {Method::series, Method::volterra, Method::laplace}) {
    cmp.analytic.push_back(evaluate_curve(params, m, times, opts));
  }
  if (params.k == 1) {
    cmp.analytic.push_back(evaluate_curve(params, Method::exact_k1, times, opts));
  }
  if (with_mc) cmp.montecarlo = evaluate_curve(params, Method::montecarlo, times, opts);

  cmp.max_discrepancy.assign(times.size(), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t a = 0; a < cmp.analytic.size(); ++a) {
      for (std::size_t b = a + 1; b < cmp.analytic.size(); ++b) {
        const double d = std::abs(cmp.analytic[a].values[i] - cmp.analytic[b].values[i]);
        cmp.max_discrepancy[i] = std::max(cmp.max_discrepancy[i], d);
      }
    }
  }
  return cmp;
}

std::vector<double> uniform_times(double t_max, double step) {
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("t_max must be finite and nonnegative");
  }
  if (t_max == 0.0) return {0.0};
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  const double count = std::floor(t_max / step + 1e-9);
  if (count > 1e7) throw std::invalid_argument("too many time points");
  std::vector<double> times;
  for (int i = 0; i <= static_cast<int>(count); ++i) times.push_back(i * step);
  return times;
}

}  // namespace replen
