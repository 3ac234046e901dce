#pragma once

// Gamma renewal-time law with integer shape (Erlang), its convolution powers,
// the associated counting process and exact sampling.

#include <cstdint>

#include "replen/random.hpp"

namespace replen {

/// Erlang(shape, rate) law of the time a stock of `shape` units lasts under
/// Poisson demand of intensity `rate`.
class GammaLaw {
 public:
  /// Throws std::invalid_argument unless shape >= 1 and rate > 0.
  GammaLaw(int shape, double rate);

  int shape() const noexcept { return shape_; }
  double rate() const noexcept { return rate_; }
  double mean() const noexcept { return shape_ / rate_; }

  friend bool operator==(const GammaLaw&, const GammaLaw&) = default;

 private:
  int shape_;
  double rate_;
};

/// Regularized lower incomplete gamma P(a, x) for integer a >= 1, x >= 0.
/// Power series below x = a + 1, Lentz continued fraction above.
double regularized_gamma_p(int a, double x);

/// Upper complement Q(a, x) = 1 - P(a, x), computed without cancellation.
double regularized_gamma_q(int a, double x);

double gamma_pdf(double x, const GammaLaw& law);
double gamma_cdf(double x, const GammaLaw& law);

/// Survival 1 - F(x).
double gamma_sf(double x, const GammaLaw& law);

/// n-fold convolution F^{*n}(t); F^{*0} is identically 1.
double convolution_cdf(int n, double t, const GammaLaw& law);

/// P[N(t) = n] = F^{*n}(t) - F^{*(n+1)}(t).
double counting_pmf(int n, double t, const GammaLaw& law);

/// E[s^{N(t)}], truncated once the geometric tail s^n / (1 - s) drops below tol.
double counting_pgf(double t, double s, const GammaLaw& law, double tol = 1e-12);

/// E[e^{-sX}] = (rate / (s + rate))^shape, evaluated in log space.
double laplace_phi(double s, const GammaLaw& law);

/// Exact draw: sum of `shape` inverse-transform unit exponentials scaled by
/// 1/rate. Consumes exactly `shape` uniforms from `stream`.
double sample_renewal_time(const GammaLaw& law, RandomStream& stream) noexcept;

}  // namespace replen
