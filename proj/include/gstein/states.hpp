#pragma once

// Gaussian state model. Quadratures are ordered xxpp and the vacuum has
// covariance I/2 (hbar = 1).

#include "gstein/linalg.hpp"
#include "gstein/settings.hpp"

#include <optional>
#include <string>

namespace gstein {

/// Mean vector and covariance matrix of an n-mode Gaussian state.
///
/// Construction checks shapes and finiteness only; physicality is a separate
/// question answered by validate(). Nothing is ever symmetrised or repaired.
class GaussianState {
 public:
  GaussianState(Vector mean, Matrix cov);

  [[nodiscard]] int n_modes() const { return static_cast<int>(mean_.size() / 2); }
  [[nodiscard]] const Vector& mean() const { return mean_; }
  [[nodiscard]] const Matrix& cov() const { return cov_; }

  friend bool operator==(const GaussianState& a, const GaussianState& b) {
    return a.mean_ == b.mean_ && a.cov_ == b.cov_;
  }

 private:
  Vector mean_;
  Matrix cov_;
};

/// Two-mode standard form [[a, c], [c, b]] (+) [[a, -c], [-c, b]].
struct StandardFormParams {
  double a = 0.5;
  double b = 0.5;
  double c = 0.0;

  /// V_0 = [[a, c], [c, b]].
  [[nodiscard]] Matrix v0() const;
};

/// min{sqrt((a-1/2)(b+1/2)), sqrt((a+1/2)(b-1/2))}: the largest |c| that
/// keeps both symplectic eigenvalues >= 1/2.
[[nodiscard]] double standard_form_c_max(double a, double b);

/// Throws std::invalid_argument unless a, b >= 1/2 and |c| <= c_max + slack.
void check_standard_form(const StandardFormParams& p, double slack = 1e-12);

struct ValidationReport {
  bool valid = false;
  double symmetry_residual = 0.0;
  std::optional<double> min_symplectic_eigenvalue;  // empty if V is not positive definite
  std::string message;
};

[[nodiscard]] ValidationReport validate(const GaussianState& state, double tol = 1e-9,
                                        const NumericsSettings& settings = {});

/// Throws std::invalid_argument carrying the report message if invalid.
void require_valid(const GaussianState& state, const char* role,
                   const NumericsSettings& settings = {});

[[nodiscard]] GaussianState thermal_state(double n_mean);
[[nodiscard]] GaussianState displaced_thermal(double mean_q, double mean_p, double n_mean);
/// Two-mode squeezed vacuum with n_s mean photons per mode.
[[nodiscard]] GaussianState tmsv(double n_s);
[[nodiscard]] GaussianState from_standard_form(const StandardFormParams& p, double slack = 1e-12);
/// (a, b, c) if the covariance has standard-form structure within tol and the
/// mean is zero.
[[nodiscard]] std::optional<StandardFormParams> extract_standard_form(const GaussianState& state,
                                                                      double tol = 1e-12);

/// Product state a (x) b with modes of a first.
[[nodiscard]] GaussianState tensor_product(const GaussianState& a, const GaussianState& b);

/// (mu, V) -> (S mu, S V S^T). Throws std::invalid_argument if S is not
/// symplectic within tol.
[[nodiscard]] GaussianState apply_symplectic(const GaussianState& state, const Matrix& S,
                                             double tol = 1e-9);
/// (mu, V) -> (mu + d, V).
[[nodiscard]] GaussianState displace(const GaussianState& state, const Vector& d);

/// Convert a state given in xpxp ordering [q1, p1, q2, p2, ...] to xxpp.
[[nodiscard]] GaussianState from_xpxp(const Vector& mean, const Matrix& cov);
/// Mean and covariance of the state in xpxp ordering.
[[nodiscard]] std::pair<Vector, Matrix> to_xpxp(const GaussianState& state);

}  // namespace gstein
