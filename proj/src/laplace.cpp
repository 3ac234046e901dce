#include "replen/laplace.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace replen {
namespace {

using cplx = std::complex<double>;
using wide = std::complex<long double>;

// Closed form valid on the whole plane away from its poles:
//   w_hat(s) = theta phi_k / (s (u(s) - phi_k)),  u(s) = ((s + mu) / mu)^k,
// i.e. the transform with numerator and denominator divided by phi^k(s).
// Poles: s = 0 and s = -mu + (mu / alpha) e^{2 pi i j / k}, j = 0..k-1.
class Transform {
 public:
  explicit Transform(const EffectiveParams& eff) : eff_(eff) {}

  wide operator()(wide s) const {
    const long double mu = eff_.mu;
    const wide u = std::exp(static_cast<long double>(eff_.k) * std::log(1.0L + s / mu));
    return static_cast<long double>(eff_.theta * eff_.phi_k) /
           (s * (u - static_cast<long double>(eff_.phi_k)));
  }

  wide pole(int j) const {
    const long double angle = 2.0L * std::numbers::pi_v<long double> * j / eff_.k;
    const long double radius = static_cast<long double>(eff_.mu) / eff_.alpha;
    return wide(-eff_.mu + radius * std::cos(angle), radius * std::sin(angle));
  }

  // Residue of w_hat at pole(j): theta (p + mu) / (k p).
  wide residue(wide p) const {
    return static_cast<long double>(eff_.theta) * (p + static_cast<long double>(eff_.mu)) /
           (static_cast<long double>(eff_.k) * p);
  }

  int pole_count() const { return eff_.k; }

 private:
  EffectiveParams eff_;
};

// Whether the contour s(th) = r th (cot th + i) has pole p on its left, i.e.
// between itself and the negative real axis.
bool enclosed(wide p, long double r) {
  const long double height = std::abs(p.imag());
  if (height == 0.0L) return p.real() < r;
  const long double theta = height / r;
  if (theta >= std::numbers::pi_v<long double>) return false;
  return p.real() < r * theta / std::tan(theta);
}

}  // namespace

void InversionConfig::validate() const {
  if (node_count < 8 || node_count % 2 != 0) {
    throw std::invalid_argument("node_count must be even and >= 8");
  }
  if (node_count > kMaxTalbotNodes) {
    throw std::invalid_argument("node_count above " + std::to_string(kMaxTalbotNodes) +
                                " exceeds extended precision");
  }
}

cplx w_hat(cplx s, const ModelParams& params) {
  if (!(s.real() > 0.0)) throw std::domain_error("w_hat requires Re(s) > 0");
  const wide value = Transform(effective(params))(wide(s.real(), s.imag()));
  return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

double invert(const ModelParams& params, double t, const InversionConfig& cfg) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error("inversion requires finite t > 0");
  }
  cfg.validate();
  const Transform transform(effective(params));
  const int m = cfg.node_count;
  const long double time = t;
  const long double r = 2.0L * m / (5.0L * time);
  const long double pi = std::numbers::pi_v<long double>;

  // Fixed Talbot contour s(th) = r th (cot th + i), th in (-pi, pi). Nodes
  // come in conjugate pairs; both halves are summed so the imaginary part
  // measures how well the transform respects conjugate symmetry.
  wide total = 0.5L * std::exp(r * time) * transform(wide(r, 0.0L));
  long double magnitude = std::abs(total);
  for (int j = 1; j < m; ++j) {
    const long double theta = j * pi / m;
    const long double cot = 1.0L / std::tan(theta);
    const long double sigma = theta + (theta * cot - 1.0L) * cot;
    for (const long double sign : {1.0L, -1.0L}) {
      const wide s(r * theta * cot, sign * r * theta);
      const wide term = 0.5L * std::exp(time * s) * transform(s) * wide(1.0L, sign * sigma);
      total += term;
      magnitude += std::abs(term);
    }
  }
  total *= r / m;
  magnitude *= r / m;

  // Poles the contour leaves outside contribute their residues directly;
  // otherwise slowly decaying oscillatory modes would be dropped.
  for (int j = 1; j < transform.pole_count(); ++j) {
    const wide p = transform.pole(j);
    if (!enclosed(p, r)) total += transform.residue(p) * std::exp(p * time);
  }

  const double value = static_cast<double>(total.real());
  const double slack = 1e-8 * std::abs(value) +
                       64.0 * std::numeric_limits<long double>::epsilon() *
                           static_cast<double>(magnitude);
  if (std::abs(static_cast<double>(total.imag())) > slack) {
    throw std::runtime_error("Talbot inversion left an imaginary residue");
  }
  return value;
}

double invert_or_zero(const ModelParams& params, double t, const InversionConfig& cfg) {
  if (t == 0.0) {
    cfg.validate();
    effective(params);
    return 0.0;
  }
  return invert(params, t, cfg);
}

InversionCheck check_inversion(const ModelParams& params, double t,
                               const InversionConfig& cfg) {
  InversionCheck check;
  check.value = invert(params, t, cfg);
  check.refined = invert(params, t, InversionConfig{2 * cfg.node_count});
  check.discrepancy = std::abs(check.refined - check.value);
  return check;
}

}  // namespace replen
