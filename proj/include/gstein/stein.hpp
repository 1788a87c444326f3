#pragma once

// Gaussian approximation to the optimal Type-II error exponent of an
// asymmetric test between rho^{(x)M} and sigma^{(x)M} at Type-I bound eps:
//   -ln beta ~ M D + sqrt(M V) Phi^{-1}(eps).
// The O(ln M) correction is not included anywhere.

#include <cstdint>
#include <span>
#include <vector>

namespace gstein {

/// Standard normal CDF via erfc.
[[nodiscard]] double normal_cdf(double x);

/// Phi^{-1}(eps) for eps in (0, 1); std::invalid_argument otherwise.
[[nodiscard]] double inverse_normal_cdf(double epsilon);

struct ExponentPoint {
  std::int64_t trials = 1;  // M
  double epsilon = 0.5;
  double r_first = 0.0;   // D
  double r_second = 0.0;  // D + sqrt(V / M) Phi^{-1}(eps)
};

[[nodiscard]] ExponentPoint gaussian_approx_exponent(double relative_entropy, double variance,
                                                     double epsilon, std::int64_t trials);

/// One point per entry of a nonempty, strictly ascending trial grid.
[[nodiscard]] std::vector<ExponentPoint> exponent_curve(double relative_entropy, double variance,
                                                        double epsilon,
                                                        std::span<const std::int64_t> trials);

/// Integers round(m_max^{k/(points-1)}), k = 0..points-1, with duplicates
/// from rounding removed. Starts at 1 and ends at m_max.
[[nodiscard]] std::vector<std::int64_t> log_spaced_trials(std::int64_t m_max, int points);

}  // namespace gstein
