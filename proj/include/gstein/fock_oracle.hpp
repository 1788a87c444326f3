#pragma once

// Brute-force cross-check in a truncated number basis. States are built from
// operational constructions (thermal weights, displacement, two-mode
// squeezing, beamsplitter mixing with a bath) and D, V are evaluated with
// dense matrix logarithms. Multi-mode basis index: mode 0 most significant.

#include "gstein/illumination.hpp"
#include "gstein/linalg.hpp"
#include "gstein/settings.hpp"

namespace gstein {

struct FockOperator {
  int cutoff = 0;   // d, levels per mode
  int n_modes = 1;
  CMatrix matrix;   // d^n x d^n
  double trace_deficit = 0.0;  // probability lost to truncation before renormalising
};

/// Ladder operator a on levels 0..cutoff-1. cutoff >= 2.
[[nodiscard]] FockOperator annihilation(int cutoff);
/// q = (a + a^dagger) / sqrt 2.
[[nodiscard]] FockOperator position_quadrature(int cutoff);
/// p = -i (a - a^dagger) / sqrt 2.
[[nodiscard]] FockOperator momentum_quadrature(int cutoff);
/// I (x) .. (x) op (x) .. (x) I with op acting on `mode`.
[[nodiscard]] FockOperator embed(const FockOperator& single_mode, int mode, int n_modes);
/// rho_1 (x) rho_2; trace deficits add.
[[nodiscard]] FockOperator tensor(const FockOperator& a, const FockOperator& b);

/// Diagonal thermal state with weights (1 - q) q^n, q = n/(n+1), renormalised
/// after truncation. CutoffTooSmallError if the lost weight exceeds the budget.
[[nodiscard]] FockOperator thermal_dm(double n_mean, int cutoff,
                                      const NumericsSettings& settings = {});

/// Smallest cutoff whose thermal truncation loss is within budget.
[[nodiscard]] int thermal_cutoff_for(double n_mean, double budget);

/// exp(alpha a^dagger - alpha^* a), computed on a padded space and cropped.
[[nodiscard]] FockOperator displacement(Complex alpha, int cutoff);
/// exp(r (a^dagger b^dagger - a b)), computed sector by sector (fixed n_a - n_b)
/// on a padded space and cropped.
[[nodiscard]] FockOperator two_mode_squeezer(double r, int cutoff);
/// exp(theta (a^dagger b - a b^dagger)) with cos^2 theta = eta, built from the
/// exact finite blocks of fixed total photon number. Heisenberg action:
/// a -> sqrt(eta) a + sqrt(1 - eta) b.
[[nodiscard]] FockOperator beamsplitter(double eta, int cutoff);

/// Squeezer applied to |00>, renormalised; N_S = sinh^2 r.
[[nodiscard]] FockOperator tmsv_dm(double n_s, int cutoff, const NumericsSettings& settings = {});

/// Return/idler state under the alternative: (TMSV (x) thermal(N_B/(1-eta)))
/// -> signal-bath beamsplitter -> partial trace over the bath. The bath keeps
/// bath_cutoff levels (0: choose the smallest cutoff >= `cutoff` meeting the
/// truncation budget).
[[nodiscard]] FockOperator qi_alternative_dm(const IlluminationParams& p, int cutoff,
                                             int bath_cutoff = 0,
                                             const NumericsSettings& settings = {});

struct Moments {
  Vector mean;
  Matrix cov;
};

/// First and second quadrature moments, xxpp ordering.
[[nodiscard]] Moments extract_moments(const FockOperator& rho);

struct ScenarioDensityMatrices {
  FockOperator rho;
  FockOperator sigma;
  int bath_cutoff = 0;  // 0 when no bath mode is involved
};

[[nodiscard]] ScenarioDensityMatrices build_scenario_dm(const HypothesisPair& pair, int cutoff,
                                                        const NumericsSettings& settings = {});
[[nodiscard]] ScenarioDensityMatrices build_thermal_pair_dm(double n_rho, double n_sigma,
                                                            int cutoff,
                                                            const NumericsSettings& settings = {});

struct OracleResult {
  double relative_entropy = 0.0;
  double variance = 0.0;
  int clamped_rho = 0;     // eigenvalues of rho raised to eig_floor
  int clamped_sigma = 0;   // eigenvalues of sigma raised to eig_floor
  double rho_weight_on_clamped_sigma = 0.0;
};

/// D = Tr{rho (ln rho - ln sigma)}, V = Tr{rho (ln rho - ln sigma)^2} - D^2.
/// OracleUnreliableError if sigma is rank deficient where rho has weight, or
/// an input is not Hermitian positive semidefinite.
[[nodiscard]] OracleResult oracle_divergences(const FockOperator& rho, const FockOperator& sigma,
                                              const NumericsSettings& settings = {});

}  // namespace gstein
