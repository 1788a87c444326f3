#pragma once

#include <string>
#include <string_view>

namespace gstein {

/// Tolerance bundle shared by every numerical routine.
///
/// Defaults are the contract values; a caller may override any field (the CLI
/// reads overrides from the GAUSS_STEIN_TOL environment variable and from
/// repeated `--tol key=value` flags).
struct NumericsSettings {
  double symmetry_tol = 1e-10;        // max |V - V^T| entry accepted as symmetric
  double validity_tol = 1e-9;         // slack on nu >= 1/2
  double pure_tol = 1e-10;            // nu within this of 1/2 is a pure direction
  double pairing_tol = 1e-10;         // +-nu pairing mismatch (relative to ||V||)
  double imag_tol = 1e-10;            // discarded imaginary residual (relative)
  double symplectic_tol = 1e-9;       // ||S Omega S^T - Omega||_max
  double reconstruction_tol = 1e-9;   // ||S (D+D) S^T - V|| / ||V||
  double mean_zero_tol = 1e-12;       // ||mu|| treated as zero
  double standard_form_slack = 1e-12; // slack on the c <= c_max constraint
  double truncation_budget = 1e-8;    // Fock-space trace deficit budget
  double eig_floor = 1e-13;           // oracle eigenvalue clamp
  double clamp_weight_budget = 1e-6;  // rho weight allowed on clamped sigma directions

  /// Apply a single `key=value` override. Throws std::invalid_argument on an
  /// unknown key or an unparsable value.
  void apply_override(std::string_view assignment);

  /// Apply a comma-separated list of `key=value` overrides.
  void apply_overrides(std::string_view list);

  [[nodiscard]] std::string to_string() const;
};

}  // namespace gstein
