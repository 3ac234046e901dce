#include "replen/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace replen {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIterations = 1'000'000;
// Below this log-value exp() underflows to zero.
constexpr double kLogUnderflow = -745.0;

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw std::domain_error(std::string(what) + " must be nonnegative, got " +
                            std::to_string(x));
  }
}

// log(x^a e^{-x} / Gamma(a))
double log_prefactor(int a, double x) {
  return a * std::log(x) - x - std::lgamma(static_cast<double>(a));
}

// Sum_{n>=0} x^n / (a (a+1) ... (a+n)); converges quickly for x < a + 1.
double lower_series(int a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) return sum;
  }
  throw std::runtime_error("incomplete gamma series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Q(a, x) / prefactor.
double upper_fraction(int a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete gamma continued fraction did not converge");
}

}  // namespace

GammaLaw::GammaLaw(int shape, double rate) : shape_(shape), rate_(rate) {
  if (shape < 1) {
    throw std::invalid_argument("gamma shape must be >= 1, got " +
                                std::to_string(shape));
  }
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("gamma rate must be positive and finite");
  }
}

double regularized_gamma_p(int a, double x) {
  if (a < 1) throw std::domain_error("incomplete gamma requires a >= 1");
  require_nonnegative(x, "incomplete gamma argument");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_pre = log_prefactor(a, x);
  if (x < a + 1.0) {
    if (log_pre < kLogUnderflow) return 0.0;
    return std::min(1.0, std::exp(log_pre) * lower_series(a, x));
  }
  if (log_pre < kLogUnderflow) return 1.0;
  return std::max(0.0, 1.0 - std::exp(log_pre) * upper_fraction(a, x));
}

double regularized_gamma_q(int a, double x) {
  if (a < 1) throw std::domain_error("incomplete gamma requires a >= 1");
  require_nonnegative(x, "incomplete gamma argument");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double log_pre = log_prefactor(a, x);
  if (x < a + 1.0) {
    if (log_pre < kLogUnderflow) return 1.0;
    return std::max(0.0, 1.0 - std::exp(log_pre) * lower_series(a, x));
  }
  if (log_pre < kLogUnderflow) return 0.0;
  return std::min(1.0, std::exp(log_pre) * upper_fraction(a, x));
}

double gamma_pdf(double x, const GammaLaw& law) {
  require_nonnegative(x, "time");
  const int k = law.shape();
  const double mu = law.rate();
  if (x == 0.0) return k == 1 ? mu : 0.0;
  const double log_density = k * std::log(mu) + (k - 1) * std::log(x) - mu * x -
                             std::lgamma(static_cast<double>(k));
  return std::exp(log_density);
}

double gamma_cdf(double x, const GammaLaw& law) {
  require_nonnegative(x, "time");
  return regularized_gamma_p(law.shape(), law.rate() * x);
}

double gamma_sf(double x, const GammaLaw& law) {
  require_nonnegative(x, "time");
  return regularized_gamma_q(law.shape(), law.rate() * x);
}

double convolution_cdf(int n, double t, const GammaLaw& law) {
  if (n < 0) throw std::domain_error("convolution order must be nonnegative");
  require_nonnegative(t, "time");
  if (n == 0) return 1.0;
  return regularized_gamma_p(n * law.shape(), law.rate() * t);
}

double counting_pmf(int n, double t, const GammaLaw& law) {
  if (n < 0) throw std::domain_error("count must be nonnegative");
  const double p = convolution_cdf(n, t, law) - convolution_cdf(n + 1, t, law);
  return std::clamp(p, 0.0, 1.0);
}

double counting_pgf(double t, double s, const GammaLaw& law, double tol) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::domain_error("generating function argument must lie in [0, 1]");
  }
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  require_nonnegative(t, "time");
  if (s == 1.0) return 1.0;

  // Terms n >= N are bounded by s^N / (1 - s) because each pmf is <= 1.
  double sum = 0.0;
  double power = 1.0;
  for (int n = 0; power / (1.0 - s) >= tol; ++n) {
    sum += power * counting_pmf(n, t, law);
    power *= s;
  }
  return sum;
}

double laplace_phi(double s, const GammaLaw& law) {
  const double mu = law.rate();
  if (!(s > -mu)) {
    throw std::domain_error("Laplace transform diverges for s <= -rate");
  }
  return std::exp(-law.shape() * std::log1p(s / mu));
}

double sample_renewal_time(const GammaLaw& law, RandomStream& stream) noexcept {
  double total = 0.0;
  for (int i = 0; i < law.shape(); ++i) total -= std::log1p(-stream.uniform());
  return total / law.rate();
}

}  // namespace replen
