#include "gstein/stein.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gstein {
namespace {

// Rational approximation of the normal quantile (P. J. Acklam), relative
// error about 1.15e-9 before refinement.
constexpr std::array<double, 6> kA = {-3.969683028665376e+01, 2.209460984245205e+02,
                                      -2.759285104469687e+02, 1.383577518672690e+02,
                                      -3.066479806614716e+01, 2.506628277459239e+00};
constexpr std::array<double, 5> kB = {-5.447609879822406e+01, 1.615858368580409e+02,
                                      -1.556989798598866e+02, 6.680131188771972e+01,
                                      -1.328068155288572e+01};
constexpr std::array<double, 6> kC = {-7.784894002430293e-03, -3.223964580411365e-01,
                                      -2.400758277161838e+00, -2.549732539343734e+00,
                                      4.374664141464968e+00, 2.938163982698783e+00};
constexpr std::array<double, 4> kD = {7.784695709041462e-03, 3.224671290700398e-01,
                                      2.445134137142996e+00, 3.754408661907416e+00};

double acklam(double p) {
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) return -acklam(1.0 - p);
  const double q = p - 0.5;
  const double r = q * q;
  return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
         (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

void require_nonnegative(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << what << " must be finite and >= 0, got " << value;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double inverse_normal_cdf(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    std::ostringstream os;
    os << "inverse_normal_cdf needs epsilon in (0, 1), got " << epsilon;
    throw std::invalid_argument(os.str());
  }
  if (epsilon == 0.5) return 0.0;
  // Work in the lower tail and mirror, so Phi^{-1}(1 - eps) = -Phi^{-1}(eps)
  // holds exactly whenever 1 - eps is representable.
  const bool upper = epsilon > 0.5;
  const double p = upper ? 1.0 - epsilon : epsilon;
  double x = acklam(p);
  // Halley refinement against the erfc-based CDF; two steps reach machine
  // precision from the 1e-9 starting point.
  for (int step = 0; step < 2; ++step) {
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return upper ? -x : x;
}

ExponentPoint gaussian_approx_exponent(double relative_entropy, double variance, double epsilon,
                                       std::int64_t trials) {
  require_nonnegative(relative_entropy, "relative entropy");
  require_nonnegative(variance, "relative entropy variance");
  if (trials < 1) throw std::invalid_argument("number of trials M must be >= 1");
  const double z = inverse_normal_cdf(epsilon);
  ExponentPoint point;
  point.trials = trials;
  point.epsilon = epsilon;
  point.r_first = relative_entropy;
  point.r_second = relative_entropy + std::sqrt(variance / static_cast<double>(trials)) * z;
  return point;
}

std::vector<ExponentPoint> exponent_curve(double relative_entropy, double variance, double epsilon,
                                          std::span<const std::int64_t> trials) {
  if (trials.empty()) throw std::invalid_argument("trial grid must not be empty");
  std::vector<ExponentPoint> curve;
  curve.reserve(trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (i > 0 && trials[i] <= trials[i - 1]) {
      throw std::invalid_argument("trial grid must be strictly ascending");
    }
    curve.push_back(gaussian_approx_exponent(relative_entropy, variance, epsilon, trials[i]));
  }
  return curve;
}

std::vector<std::int64_t> log_spaced_trials(std::int64_t m_max, int points) {
  if (m_max < 1) throw std::invalid_argument("m-max must be >= 1");
  if (points < 1) throw std::invalid_argument("m-points must be >= 1");
  if (points == 1 || m_max == 1) return {m_max};
  std::vector<std::int64_t> grid;
  const double log_max = std::log(static_cast<double>(m_max));
  for (int k = 0; k < points; ++k) {
    auto m = static_cast<std::int64_t>(std::llround(std::exp(log_max * k / (points - 1))));
    if (k == points - 1) m = m_max;
    if (grid.empty() || m > grid.back()) grid.push_back(m);
  }
  return grid;
}

}  // namespace gstein
