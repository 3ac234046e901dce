#pragma once

// Laplace-domain representation of w_k and its numerical inversion.

#include <complex>

#include "replen/valuation.hpp"

namespace replen {

/// The contour sum cancels terms of size e^{0.4 M}; beyond this node count
/// the cancellation exhausts long double precision.
inline constexpr int kMaxTalbotNodes = 64;

struct InversionConfig {
  int node_count = 32;  ///< Talbot contour nodes; even, in [8, kMaxTalbotNodes]

  void validate() const;
};

/// int_0^inf e^{-st} w_k(t) dt = theta phi_k phi^k(s) / (s (1 - phi_k phi^k(s))).
/// Requires Re(s) > 0.
std::complex<double> w_hat(std::complex<double> s, const ModelParams& params);

/// Fixed-Talbot inversion of w_hat at t > 0, summed in extended precision.
/// Poles of w_hat that the contour does not enclose are added back through
/// their closed-form residues. The symmetric contour sum must be real up to
/// rounding; a residual imaginary part above 1e-8 |value| raises
/// std::runtime_error. Throws std::domain_error for t <= 0.
double invert(const ModelParams& params, double t, const InversionConfig& cfg = {});

/// Same as invert() but defines the value at t = 0 as w_k(0) = 0.
double invert_or_zero(const ModelParams& params, double t,
                      const InversionConfig& cfg = {});

struct InversionCheck {
  double value;        ///< node_count nodes
  double refined;      ///< 2 * node_count nodes
  double discrepancy;  ///< |refined - value|
};

/// Node-doubling self-check of invert(); needs 2 * node_count <= kMaxTalbotNodes.
InversionCheck check_inversion(const ModelParams& params, double t,
                               const InversionConfig& cfg = {});

}  // namespace replen
