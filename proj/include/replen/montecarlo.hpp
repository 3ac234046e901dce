#pragma once

// Direct simulation of the discounted cost process W_k(t) and the perpetuity
// V_k = W_k(inf).
//
// Path p draws from RandomStream::substream(seed, p). Paths are grouped in
// fixed blocks of kPathBlock; each block is accumulated in path order and the
// block statistics are merged in block order. The parallel kernels only change
// which worker computes a block, so their output is bit-identical to the
// serial reference for any thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "replen/execution.hpp"
#include "replen/random.hpp"
#include "replen/valuation.hpp"

namespace replen {

inline constexpr double kDefaultTailTol = 1e-12;
inline constexpr std::uint64_t kPathBlock = 4096;

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / sqrt(n_paths)
  std::uint64_t n_paths = 0;
  std::uint64_t seed = 0;
  double truncation_bias_bound = 0.0;  ///< perpetuity runs only

  friend bool operator==(const MCEstimate&, const MCEstimate&) = default;
};

struct MCOptions {
  std::uint64_t n_paths = 1'000'000;
  std::uint64_t seed = 0;
  ExecutionPolicy execution{};
};

/// One path of W_k at ascending `horizons`: out[i] is the discounted sum of
/// payments at renewals no later than horizons[i].
void sample_cost_path(const EffectiveParams& eff, std::span<const double> horizons,
                      RandomStream& stream, std::span<double> out);

/// One path of V_k, stopped after the first payment whose discount factor is
/// below tail_tol (that payment included).
double sample_perpetuity_path(const EffectiveParams& eff, double tail_tol,
                              RandomStream& stream);

/// Estimate of w_k(t). Requires t > 0 and n_paths >= 2.
MCEstimate simulate_wk(const ModelParams& params, double t, const MCOptions& opts);

/// Estimates of w_k at several horizons from one set of paths. Each entry is
/// bit-identical to simulate_wk at that horizon alone.
std::vector<MCEstimate> simulate_wk_grid(const ModelParams& params,
                                         std::span<const double> horizons,
                                         const MCOptions& opts);

/// Estimate of v_k. Each path stops once its discount factor falls below
/// tail_tol; the omitted remainder is at most tail_tol * v_k in expectation
/// and is reported as truncation_bias_bound (no correction applied).
MCEstimate simulate_vk(const ModelParams& params, const MCOptions& opts,
                       double tail_tol = kDefaultTailTol);

struct PerpetuityCheck {
  MCEstimate lhs;  ///< V_k sampled directly
  MCEstimate rhs;  ///< e^{-r X} (theta + V_k), X independent of V_k

  double combined_std_error() const;
  /// |lhs - rhs| within `sigmas` combined standard errors.
  bool agrees(double sigmas = 4.0) const;
};

/// Samples both sides of the distributional identity V = e^{-rX}(theta + V)
/// with independent streams.
PerpetuityCheck verify_perpetuity_equation(const ModelParams& params,
                                           const MCOptions& opts,
                                           double tail_tol = kDefaultTailTol);

}  // namespace replen
