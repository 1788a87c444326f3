#include "gstein/states.hpp"

#include "gstein/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gstein {
namespace {

void require_photon_number(double n, const char* what) {
  if (!(n >= 0.0) || !std::isfinite(n)) {
    std::ostringstream os;
    os << what << " needs a finite mean photon number >= 0, got " << n;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

GaussianState::GaussianState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0) {
    throw std::invalid_argument("mean vector must have even positive length 2n, got " +
                                std::to_string(mean_.size()));
  }
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    std::ostringstream os;
    os << "covariance must be " << mean_.size() << "x" << mean_.size() << ", got " << cov_.rows()
       << "x" << cov_.cols();
    throw std::invalid_argument(os.str());
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw std::invalid_argument("state contains non-finite entries");
  }
}

Matrix StandardFormParams::v0() const {
  Matrix m(2, 2);
  m << a, c, c, b;
  return m;
}

double standard_form_c_max(double a, double b) {
  return std::sqrt(std::max(0.0, std::min((a - 0.5) * (b + 0.5), (a + 0.5) * (b - 0.5))));
}

void check_standard_form(const StandardFormParams& p, double slack) {
  if (!(p.a >= 0.5) || !(p.b >= 0.5) || !std::isfinite(p.a) || !std::isfinite(p.b) ||
      !std::isfinite(p.c)) {
    std::ostringstream os;
    os << "standard form needs a, b >= 1/2, got a = " << p.a << ", b = " << p.b;
    throw std::invalid_argument(os.str());
  }
  const double c_max = standard_form_c_max(p.a, p.b);
  if (std::abs(p.c) > c_max + slack) {
    std::ostringstream os;
    os.precision(17);
    os << "standard form correlation |c| = " << std::abs(p.c) << " exceeds c_max = " << c_max
       << "; the state would violate the uncertainty relation";
    throw std::invalid_argument(os.str());
  }
}

ValidationReport validate(const GaussianState& state, double tol, const NumericsSettings& settings) {
  ValidationReport report;
  const Matrix& V = state.cov();
  report.symmetry_residual = max_abs(Matrix(V - V.transpose()));
  if (report.symmetry_residual > settings.symmetry_tol * std::max(1.0, max_abs(V))) {
    std::ostringstream os;
    os << "covariance is not symmetric (max |V - V^T| = " << report.symmetry_residual << ")";
    report.message = os.str();
    return report;
  }
  try {
    const auto w = williamson(V, settings);
    report.min_symplectic_eigenvalue = w.nu.minCoeff();
  } catch (const std::exception& e) {
    report.message = e.what();
    return report;
  }
  if (*report.min_symplectic_eigenvalue < 0.5 - tol) {
    std::ostringstream os;
    os.precision(17);
    os << "uncertainty relation violated: min symplectic eigenvalue "
       << *report.min_symplectic_eigenvalue << " < 1/2";
    report.message = os.str();
    return report;
  }
  report.valid = true;
  report.message = "ok";
  return report;
}

void require_valid(const GaussianState& state, const char* role, const NumericsSettings& settings) {
  const auto report = validate(state, settings.validity_tol, settings);
  if (!report.valid) {
    throw std::invalid_argument(std::string(role) + ": " + report.message);
  }
}

GaussianState thermal_state(double n_mean) {
  require_photon_number(n_mean, "thermal_state");
  return {Vector::Zero(2), (n_mean + 0.5) * Matrix::Identity(2, 2)};
}

GaussianState displaced_thermal(double mean_q, double mean_p, double n_mean) {
  require_photon_number(n_mean, "displaced_thermal");
  Vector mean(2);
  mean << mean_q, mean_p;
  return {mean, (n_mean + 0.5) * Matrix::Identity(2, 2)};
}

GaussianState tmsv(double n_s) {
  require_photon_number(n_s, "tmsv");
  const double mu = n_s + 0.5;
  // mu^2 - 1/4 = n_s (n_s + 1), written to avoid cancellation at small n_s.
  return from_standard_form({mu, mu, std::sqrt(n_s * (n_s + 1.0))}, 1e-12);
}

GaussianState from_standard_form(const StandardFormParams& p, double slack) {
  check_standard_form(p, slack);
  Matrix cov = Matrix::Zero(4, 4);
  cov.topLeftCorner(2, 2) = p.v0();
  Matrix pp = p.v0();
  pp(0, 1) = pp(1, 0) = -p.c;
  cov.bottomRightCorner(2, 2) = pp;
  return {Vector::Zero(4), cov};
}

std::optional<StandardFormParams> extract_standard_form(const GaussianState& state, double tol) {
  if (state.n_modes() != 2 || state.mean().cwiseAbs().maxCoeff() > tol) return std::nullopt;
  const Matrix& V = state.cov();
  StandardFormParams p{V(0, 0), V(1, 1), V(0, 1)};
  Matrix expected = Matrix::Zero(4, 4);
  expected.topLeftCorner(2, 2) = p.v0();
  expected.bottomRightCorner(2, 2) << p.a, -p.c, -p.c, p.b;
  if (max_abs(Matrix(V - expected)) > tol * std::max(1.0, max_abs(V))) return std::nullopt;
  return p;
}

GaussianState tensor_product(const GaussianState& a, const GaussianState& b) {
  const int na = a.n_modes();
  const int nb = b.n_modes();
  const int n = na + nb;
  // Map each factor's xxpp index into the joint xxpp index.
  auto index_a = [&](int k) { return k < na ? k : n + (k - na); };
  auto index_b = [&](int k) { return k < nb ? na + k : n + na + (k - nb); };
  Vector mean = Vector::Zero(2 * n);
  Matrix cov = Matrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < 2 * na; ++i) {
    mean(index_a(i)) = a.mean()(i);
    for (int j = 0; j < 2 * na; ++j) cov(index_a(i), index_a(j)) = a.cov()(i, j);
  }
  for (int i = 0; i < 2 * nb; ++i) {
    mean(index_b(i)) = b.mean()(i);
    for (int j = 0; j < 2 * nb; ++j) cov(index_b(i), index_b(j)) = b.cov()(i, j);
  }
  return {mean, cov};
}

GaussianState apply_symplectic(const GaussianState& state, const Matrix& S, double tol) {
  if (S.rows() != state.mean().size()) {
    throw std::invalid_argument("symplectic matrix dimension does not match the state");
  }
  if (!is_symplectic(S, tol)) {
    throw std::invalid_argument("apply_symplectic: matrix is not symplectic");
  }
  return {S * state.mean(), S * state.cov() * S.transpose()};
}

GaussianState displace(const GaussianState& state, const Vector& d) {
  if (d.size() != state.mean().size()) {
    throw std::invalid_argument("displacement length does not match the state");
  }
  return {state.mean() + d, state.cov()};
}

GaussianState from_xpxp(const Vector& mean, const Matrix& cov) {
  if (mean.size() == 0 || mean.size() % 2 != 0) {
    throw std::invalid_argument("xpxp mean vector must have even positive length");
  }
  const Matrix P = xpxp_to_xxpp_permutation(static_cast<int>(mean.size() / 2));
  if (cov.rows() != P.rows() || cov.cols() != P.cols()) {
    throw std::invalid_argument("xpxp covariance has wrong shape");
  }
  return {P * mean, P * cov * P.transpose()};
}

std::pair<Vector, Matrix> to_xpxp(const GaussianState& state) {
  const Matrix P = xpxp_to_xxpp_permutation(state.n_modes());
  return {P.transpose() * state.mean(), P.transpose() * state.cov() * P};
}

}  // namespace gstein
