#pragma once

#include <string_view>
#include <vector>

namespace replen {

enum class Method { series, volterra, laplace, asymptotic, exact_k1, montecarlo };

std::string_view to_string(Method method) noexcept;

/// Parses the method tags accepted on the command line ("mc" is an alias for
/// montecarlo). Throws std::invalid_argument for unknown tags.
Method parse_method(std::string_view tag);

/// w_k(t) sampled on a strictly ascending time grid.
struct ValueCurve {
  std::vector<double> times;
  std::vector<double> values;
  Method method = Method::series;
  std::vector<double> std_errors;  ///< Monte Carlo only; empty otherwise

  /// Throws std::logic_error when lengths differ or times are not ascending.
  void validate() const;
};

}  // namespace replen
