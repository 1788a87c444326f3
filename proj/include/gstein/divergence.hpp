#pragma once

// Relative entropy D(rho||sigma) and relative entropy variance V(rho||sigma)
// of Gaussian states, in nats and nats^2.
//
// sigma must be faithful: every nu^sigma > 1/2 + pure_tol, otherwise
// NotFullSupportError is thrown (D may be infinite there). States are checked
// with validate() first and std::invalid_argument is thrown for unphysical
// input or mismatched mode counts.

#include "gstein/settings.hpp"
#include "gstein/states.hpp"

#include <optional>
#include <string_view>

namespace gstein {

enum class FormulaRoute { general, alternate, standard_form, g_form };

[[nodiscard]] std::string_view to_string(FormulaRoute route);

struct DivergenceReport {
  double relative_entropy = 0.0;
  double variance = 0.0;
  Vector gamma;                        // mu^rho - mu^sigma
  std::optional<double> gamma_norm;    // ||G_rho - G_sigma||_F; empty if rho has pure directions
  FormulaRoute formula_route = FormulaRoute::general;   // route used for the variance
  FormulaRoute entropy_route = FormulaRoute::general;   // route used for the relative entropy

  std::optional<Matrix> g_rho;  // empty if rho has pure directions
  Matrix g_sigma;
  double z_rho = 0.0;
  double z_sigma = 0.0;
  Vector nu_rho;
  Vector nu_sigma;
};

/// g(x) = (x+1) ln(x+1) - x ln x, the entropy of a thermal state with x
/// mean photons; g(0) = 0.
[[nodiscard]] double thermal_entropy(double x);

/// D = [ln(Z_sigma / Z_rho) - Tr{Gamma V^rho} + gamma^T G_sigma gamma] / 2.
/// Requires full-rank rho (PureStateDomainError otherwise).
[[nodiscard]] double relative_entropy_partition_form(const GaussianState& rho,
                                                     const GaussianState& sigma,
                                                     const NumericsSettings& settings = {});

/// D = [ln Z_sigma + Tr{G_sigma V^rho} + gamma^T G_sigma gamma] / 2
///     - sum_i g(nu_i^rho - 1/2). Finite for pure rho.
[[nodiscard]] double relative_entropy_g_form(const GaussianState& rho, const GaussianState& sigma,
                                             const NumericsSettings& settings = {});

/// Partition form for full-rank rho, g-form when rho has a pure direction.
[[nodiscard]] double relative_entropy(const GaussianState& rho, const GaussianState& sigma,
                                      const NumericsSettings& settings = {});

/// V = Tr{(Gamma V^rho)^2}/2 + Tr{(Gamma Omega)^2}/8
///     + gamma^T G_sigma V^rho G_sigma gamma.
/// Requires full-rank rho (PureStateDomainError otherwise).
[[nodiscard]] double relative_entropy_variance_general(const GaussianState& rho,
                                                       const GaussianState& sigma,
                                                       const NumericsSettings& settings = {});

/// Alternate form in terms of the Williamson data of both states, finite when
/// rho has pure directions. Zero-mean states only (std::invalid_argument
/// otherwise).
[[nodiscard]] double relative_entropy_variance_alternate(const GaussianState& rho,
                                                         const GaussianState& sigma,
                                                         const NumericsSettings& settings = {});

/// General form for full-rank rho; alternate form for zero-mean states where
/// rho has pure directions. A rho with pure directions and nonzero means is
/// rejected with PureStateDomainError.
[[nodiscard]] double relative_entropy_variance(const GaussianState& rho,
                                               const GaussianState& sigma,
                                               const NumericsSettings& settings = {});

/// Both quantities plus intermediates, with the same dispatch as above.
[[nodiscard]] DivergenceReport divergences(const GaussianState& rho, const GaussianState& sigma,
                                           const NumericsSettings& settings = {});

/// Closed-form two-mode evaluation for standard-form covariances (zero mean)
/// using the 2x2 symplectic blocks S_0 = [[w+, w-], [w-, w+]].
/// Requires full-rank sigma; the variance additionally needs full-rank rho.
[[nodiscard]] DivergenceReport standard_form_divergences(const StandardFormParams& rho,
                                                         const StandardFormParams& sigma,
                                                         const NumericsSettings& settings = {});

/// Williamson data of a standard-form block read off in closed form.
struct StandardFormSymplectic {
  double nu_minus = 0.5;   // symplectic eigenvalue carried by mode 1
  double nu_plus = 0.5;    // symplectic eigenvalue carried by mode 2
  double omega_plus = 1.0;
  double omega_minus = 0.0;  // carries the sign of c
  [[nodiscard]] Matrix s0() const;
};

[[nodiscard]] StandardFormSymplectic standard_form_symplectic(const StandardFormParams& p);

}  // namespace gstein
