#include "replen/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

#include "replen/random.hpp"

namespace replen {
namespace {

constexpr std::uint64_t kPurposeDirect = 0;
constexpr std::uint64_t kPurposeRenewal = 1;
constexpr std::uint64_t kPurposeTail = 2;

// Running mean and sum of squared deviations.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) noexcept {
    if (other.count == 0.0) return;
    const double total = count + other.count;
    const double delta = other.mean - mean;
    mean += delta * (other.count / total);
    m2 += other.m2 + delta * delta * (count * other.count / total);
    count = total;
  }
};

// Runs `path(index, out)` for every path, where `out` receives `width`
// samples, and returns per-column moments merged in block order.
template <class PathFn>
std::vector<Moments> run_paths(std::uint64_t n_paths, std::size_t width,
                               const ExecutionPolicy& policy, PathFn path) {
  const std::uint64_t n_blocks = (n_paths + kPathBlock - 1) / kPathBlock;
  std::vector<Moments> blocks(n_blocks * width);

  auto run_block = [&](std::uint64_t b) {
    std::vector<double> out(width);
    Moments* stats = blocks.data() + b * width;
    const std::uint64_t end = std::min(n_paths, (b + 1) * kPathBlock);
    for (std::uint64_t p = b * kPathBlock; p < end; ++p) {
      path(p, std::span<double>(out));
      for (std::size_t i = 0; i < width; ++i) stats[i].add(out[i]);
    }
  };

  if (policy.mode == Execution::serial) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    const int threads = policy.threads > 0 ? policy.threads : omp_get_max_threads();
    const auto blocks_signed = static_cast<std::int64_t>(n_blocks);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t b = 0; b < blocks_signed; ++b) {
      run_block(static_cast<std::uint64_t>(b));
    }
  }

  std::vector<Moments> merged(width);
  for (std::uint64_t b = 0; b < n_blocks; ++b) {
    for (std::size_t i = 0; i < width; ++i) merged[i].merge(blocks[b * width + i]);
  }
  return merged;
}

MCEstimate to_estimate(const Moments& m, const MCOptions& opts) {
  MCEstimate est;
  est.mean = m.mean;
  const double variance = m.m2 / (m.count - 1.0);
  est.std_error = std::sqrt(std::max(0.0, variance) / m.count);
  est.n_paths = opts.n_paths;
  est.seed = opts.seed;
  return est;
}

void validate_options(const MCOptions& opts) {
  if (opts.n_paths < 2) throw std::invalid_argument("n_paths must be >= 2");
  if (opts.execution.threads < 0) throw std::invalid_argument("threads must be >= 0");
}

void validate_tail_tol(double tail_tol) {
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
    throw std::invalid_argument("tail_tol must lie in (0, 1)");
  }
}

}  // namespace

void sample_cost_path(const EffectiveParams& eff, std::span<const double> horizons,
                      RandomStream& stream, std::span<double> out) {
  const GammaLaw law = eff.law();
  double total = 0.0;
  double elapsed = 0.0;
  std::size_t next = 0;
  while (next < horizons.size()) {
    elapsed += sample_renewal_time(law, stream);
    // N(t) counts renewals at or before t.
    while (next < horizons.size() && elapsed > horizons[next]) out[next++] = total;
    if (next == horizons.size()) break;
    total += eff.theta * std::exp(-eff.r_eff * elapsed);
  }
}

double sample_perpetuity_path(const EffectiveParams& eff, double tail_tol,
                              RandomStream& stream) {
  const GammaLaw law = eff.law();
  double total = 0.0;
  double elapsed = 0.0;
  for (;;) {
    elapsed += sample_renewal_time(law, stream);
    const double discount = std::exp(-eff.r_eff * elapsed);
    total += eff.theta * discount;
    if (discount < tail_tol) return total;
  }
}

std::vector<MCEstimate> simulate_wk_grid(const ModelParams& params,
                                         std::span<const double> horizons,
                                         const MCOptions& opts) {
  validate_options(opts);
  const EffectiveParams eff = effective(params);
  if (horizons.empty()) return {};
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!(horizons[i] > 0.0) || !std::isfinite(horizons[i])) {
      throw std::domain_error("simulation horizons must be finite and positive");
    }
    if (i > 0 && horizons[i] < horizons[i - 1]) {
      throw std::invalid_argument("simulation horizons must be ascending");
    }
  }

  const auto moments = run_paths(
      opts.n_paths, horizons.size(), opts.execution,
      [&](std::uint64_t p, std::span<double> out) {
        RandomStream stream = RandomStream::substream(opts.seed, p, kPurposeDirect);
        sample_cost_path(eff, horizons, stream, out);
      });

  std::vector<MCEstimate> estimates;
  estimates.reserve(moments.size());
  for (const auto& m : moments) estimates.push_back(to_estimate(m, opts));
  return estimates;
}

MCEstimate simulate_wk(const ModelParams& params, double t, const MCOptions& opts) {
  const double horizon[] = {t};
  return simulate_wk_grid(params, horizon, opts).front();
}

MCEstimate simulate_vk(const ModelParams& params, const MCOptions& opts,
                       double tail_tol) {
  validate_options(opts);
  validate_tail_tol(tail_tol);
  const EffectiveParams eff = effective(params);

  const auto moments = run_paths(
      opts.n_paths, 1, opts.execution, [&](std::uint64_t p, std::span<double> out) {
        RandomStream stream = RandomStream::substream(opts.seed, p, kPurposeDirect);
        out[0] = sample_perpetuity_path(eff, tail_tol, stream);
      });

  MCEstimate est = to_estimate(moments.front(), opts);
  est.truncation_bias_bound = tail_tol * eff.v;
  return est;
}

double PerpetuityCheck::combined_std_error() const {
  return std::hypot(lhs.std_error, rhs.std_error);
}

bool PerpetuityCheck::agrees(double sigmas) const {
  return std::abs(lhs.mean - rhs.mean) <= sigmas * combined_std_error();
}

PerpetuityCheck verify_perpetuity_equation(const ModelParams& params,
                                           const MCOptions& opts, double tail_tol) {
  PerpetuityCheck check;
  check.lhs = simulate_vk(params, opts, tail_tol);

  const EffectiveParams eff = effective(params);
  const GammaLaw law = eff.law();
  const auto moments = run_paths(
      opts.n_paths, 1, opts.execution, [&](std::uint64_t p, std::span<double> out) {
        RandomStream first = RandomStream::substream(opts.seed, p, kPurposeRenewal);
        RandomStream rest = RandomStream::substream(opts.seed, p, kPurposeTail);
        const double x = sample_renewal_time(law, first);
        const double v = sample_perpetuity_path(eff, tail_tol, rest);
        out[0] = std::exp(-eff.r_eff * x) * (eff.theta + v);
      });
  check.rhs = to_estimate(moments.front(), opts);
  check.rhs.truncation_bias_bound = check.lhs.truncation_bias_bound;
  return check;
}

}  // namespace replen
