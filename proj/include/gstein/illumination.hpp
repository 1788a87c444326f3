#pragma once

// Target detection in a thermal bath. Null hypothesis: no object, the return
// mode is a thermal bath with N_B photons. Alternative: object present, the
// return is a_R = sqrt(eta) a_S + sqrt(1 - eta) a_B with bath N_B / (1 - eta).
//
// Two-mode states are ordered (return, idler).

#include "gstein/divergence.hpp"
#include "gstein/settings.hpp"
#include "gstein/states.hpp"
#include "gstein/stein.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace gstein {

enum class Transmitter { coherent, qi };

[[nodiscard]] std::string_view to_string(Transmitter t);
/// "coherent" or "qi"; std::invalid_argument otherwise.
[[nodiscard]] Transmitter parse_transmitter(std::string_view name);

struct IlluminationParams {
  double n_s = 0.0;      // mean signal photon number, >= 0
  double n_b = 1.0;      // mean background photon number, > 0
  double eta = 0.5;      // in (0, 1); eta = 1 is accepted for the coherent transmitter
  double epsilon = 0.01; // Type-I error bound, in (0, 1)

  /// Throws std::invalid_argument if out of range for the transmitter.
  void validate(Transmitter t) const;
};

struct HypothesisPair {
  GaussianState null_state;
  GaussianState alt_state;
  Transmitter transmitter;
  IlluminationParams params;
};

/// (D, V) in (nats, nats^2).
struct DivergencePair {
  double relative_entropy = 0.0;
  double variance = 0.0;
};

/// Null: thermal(N_B). Alternative: thermal(N_B) displaced to (sqrt(2 eta N_S), 0).
[[nodiscard]] HypothesisPair coherent_pair(const IlluminationParams& p);

/// Null: thermal(N_B) (x) thermal(N_S). Alternative: standard form with
/// a = kappa = eta N_S + N_B + 1/2, b = N_S + 1/2, c = sqrt(eta) sqrt(N_S (N_S + 1)).
[[nodiscard]] HypothesisPair qi_pair(const IlluminationParams& p);

[[nodiscard]] HypothesisPair make_pair(Transmitter t, const IlluminationParams& p);

/// D = eta N_S ln(1 + 1/N_B), V = eta N_S (2 N_B + 1) ln^2(1 + 1/N_B).
[[nodiscard]] DivergencePair coherent_closed_form(const IlluminationParams& p);

/// Leading terms for large N_S at fixed N_B:
/// D ~ [eta N_S / (1 - eta)] ln(1 + (1 - eta) / N_B), V ~ D^2.
[[nodiscard]] DivergencePair qi_leading_order_ns(const IlluminationParams& p);

/// Leading terms for large N_B at fixed N_S > 0:
/// D ~ eta N_S (N_S + 1) ln(1 + 1/N_S) / N_B,
/// V ~ eta N_S (N_S + 1)(2 N_S + 1) ln^2(1 + 1/N_S) / N_B.
[[nodiscard]] DivergencePair qi_leading_order_nb(const IlluminationParams& p);

/// D and V of a pair through the general divergence routines.
[[nodiscard]] DivergencePair exact_divergences(const HypothesisPair& pair,
                                               const NumericsSettings& settings = {});

/// Evaluates every parameter point, possibly concurrently; results are in
/// input order.
[[nodiscard]] std::vector<DivergencePair> evaluate_grid(Transmitter t,
                                                        std::span<const IlluminationParams> grid,
                                                        const NumericsSettings& settings = {},
                                                        unsigned max_threads = 0);

struct SweepRow {
  Transmitter transmitter;
  IlluminationParams params;
  std::int64_t trials = 1;
  double relative_entropy = 0.0;
  double variance = 0.0;
  double r_first = 0.0;
  double r_second = 0.0;
};

/// Rows ordered by (transmitter in the given order, M ascending).
[[nodiscard]] std::vector<SweepRow> comparison_sweep(const IlluminationParams& p,
                                                     std::span<const std::int64_t> trials,
                                                     std::span<const Transmitter> transmitters,
                                                     const NumericsSettings& settings = {});

/// Smallest M >= 1 with D_a + sqrt(V_a / M) Phi^{-1}(eps) > D_b, searching up
/// to m_max. Empty if no such M exists in [1, m_max].
[[nodiscard]] std::optional<std::int64_t> crossover_trials(const DivergencePair& challenger,
                                                           double incumbent_exponent,
                                                           double epsilon, std::int64_t m_max);

/// Header `transmitter,n_s,n_b,eta,epsilon,M,D,V,R_first,R_second`, preceded
/// by one `#` comment line; numbers with 12 significant digits.
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

}  // namespace gstein
