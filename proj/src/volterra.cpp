#include "replen/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace replen {

int GridSpec::steps() const {
  if (!(t_max > 0.0) || !(h > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("grid requires t_max > 0 and h > 0");
  }
  const double ratio = t_max / h;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * ratio) {
    throw std::invalid_argument("t_max must be an integer multiple of h");
  }
  if (n < 2.0) throw std::invalid_argument("grid needs at least two steps (h <= t_max / 2)");
  if (n > 1e8) throw std::invalid_argument("grid too fine");
  return static_cast<int>(n);
}

namespace {

// 8-point Gauss-Legendre rule on [0, 1].
constexpr double kNodes[8] = {0.019855071751231856, 0.10166676129318664,
                              0.23723379504183550,  0.40828267875217510,
                              0.59171732124782490,  0.76276620495816450,
                              0.89833323870681336,  0.98014492824876814};
constexpr double kWeights[8] = {0.050614268145188130, 0.11119051722668724,
                                0.15685332293894364,  0.18134189168918100,
                                0.18134189168918100,  0.15685332293894364,
                                0.11119051722668724,  0.050614268145188130};

struct CellMoments {
  double mass;   // int_cell K(s) ds
  double slope;  // int_cell K(s) (s - left) / h ds
};

// Moments of K = phi_k f over every cell [c h, (c + 1) h].
std::vector<CellMoments> cell_moments(const EffectiveParams& eff, double h, int cells) {
  const GammaLaw law = eff.law();
  const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * eff.mu * h)));
  const double width = h / panels;
  std::vector<CellMoments> moments(cells);
  for (int c = 0; c < cells; ++c) {
    const double left = c * h;
    double mass = 0.0;
    double slope = 0.0;
    for (int p = 0; p < panels; ++p) {
      for (int q = 0; q < 8; ++q) {
        const double offset = (p + kNodes[q]) * width;
        const double weight = kWeights[q] * width * gamma_pdf(left + offset, law);
        mass += weight;
        slope += weight * (offset / h);
      }
    }
    moments[c] = {eff.phi_k * mass, eff.phi_k * slope};
  }
  return moments;
}

}  // namespace

ValueCurve solve_renewal(const ModelParams& params, const GridSpec& grid) {
  const EffectiveParams eff = effective(params);
  const int n = grid.steps();
  const double h = grid.h;
  const GammaLaw law = eff.law();

  if (!(eff.phi_k < 1.0)) {
    throw std::logic_error("renewal kernel is not defective (phi_k >= 1)");
  }

  // Product trapezoidal rule: w is interpolated linearly between grid points
  // and integrated exactly against the kernel, so
  //   int_0^{t_i} K(t_i - u) w(u) du ~ sum_j weight[i - j] w_j
  // with hat-function weights built from the cell moments.
  const std::vector<CellMoments> moments = cell_moments(eff, h, n);
  std::vector<double> weight(n);
  weight[0] = moments[0].mass - moments[0].slope;
  for (int m = 1; m < n; ++m) {
    weight[m] = moments[m - 1].slope + moments[m].mass - moments[m].slope;
  }

  // weight[0] < phi_k < 1 always; kept as a guard on the quadrature.
  if (weight[0] >= 1.0) {
    throw std::invalid_argument("step too large for implicit diagonal");
  }
  const double scale = 1.0 / (1.0 - weight[0]);

  ValueCurve curve;
  curve.method = Method::volterra;
  curve.times.resize(n + 1);
  curve.values.assign(n + 1, 0.0);
  std::vector<double>& w = curve.values;

  for (int i = 0; i <= n; ++i) curve.times[i] = i * h;

  // w_0 = 0, so the j = 0 endpoint drops out.
  for (int i = 1; i <= n; ++i) {
    const double forcing = eff.theta * eff.phi_k * gamma_cdf(curve.times[i], law);
    const double* row = weight.data() + i;  // row[-j] = weight[i - j]
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    int j = 1;
    for (; j + 3 < i; j += 4) {
      acc0 += row[-j] * w[j];
      acc1 += row[-(j + 1)] * w[j + 1];
      acc2 += row[-(j + 2)] * w[j + 2];
      acc3 += row[-(j + 3)] * w[j + 3];
    }
    for (; j < i; ++j) acc0 += row[-j] * w[j];
    w[i] = (forcing + (acc0 + acc1) + (acc2 + acc3)) * scale;
  }
  return curve;
}

}  // namespace replen
