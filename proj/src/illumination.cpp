#include "gstein/illumination.hpp"

#include "gstein/format.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gstein {

std::string_view to_string(Transmitter t) { return t == Transmitter::coherent ? "coherent" : "qi"; }

Transmitter parse_transmitter(std::string_view name) {
  if (name == "coherent") return Transmitter::coherent;
  if (name == "qi") return Transmitter::qi;
  throw std::invalid_argument("unknown transmitter '" + std::string(name) +
                              "' (expected coherent or qi)");
}

void IlluminationParams::validate(Transmitter t) const {
  std::ostringstream os;
  if (!(n_s >= 0.0) || !std::isfinite(n_s)) {
    os << "N_S must be finite and >= 0, got " << n_s;
  } else if (!(n_b > 0.0) || !std::isfinite(n_b)) {
    os << "N_B must be finite and > 0, got " << n_b;
  } else if (!(eta > 0.0) || eta > 1.0 || (t == Transmitter::qi && eta >= 1.0)) {
    os << "eta must lie in " << (t == Transmitter::qi ? "(0, 1)" : "(0, 1]") << ", got " << eta;
  } else if (!(epsilon > 0.0 && epsilon < 1.0)) {
    os << "epsilon must lie in (0, 1), got " << epsilon;
  } else {
    return;
  }
  throw std::invalid_argument(os.str());
}

HypothesisPair coherent_pair(const IlluminationParams& p) {
  p.validate(Transmitter::coherent);
  return {thermal_state(p.n_b), displaced_thermal(std::sqrt(2.0 * p.eta * p.n_s), 0.0, p.n_b),
          Transmitter::coherent, p};
}

HypothesisPair qi_pair(const IlluminationParams& p) {
  p.validate(Transmitter::qi);
  const double mu = p.n_s + 0.5;
  const double kappa = p.eta * p.n_s + p.n_b + 0.5;
  // sqrt(mu^2 - 1/4) = sqrt(N_S (N_S + 1)).
  const double c = std::sqrt(p.eta) * std::sqrt(p.n_s * (p.n_s + 1.0));
  GaussianState null_state = from_standard_form({p.n_b + 0.5, mu, 0.0});
  GaussianState alt_state = from_standard_form({kappa, mu, c});
  return {std::move(null_state), std::move(alt_state), Transmitter::qi, p};
}

HypothesisPair make_pair(Transmitter t, const IlluminationParams& p) {
  return t == Transmitter::coherent ? coherent_pair(p) : qi_pair(p);
}

DivergencePair coherent_closed_form(const IlluminationParams& p) {
  p.validate(Transmitter::coherent);
  const double log_ratio = std::log1p(1.0 / p.n_b);
  return {p.eta * p.n_s * log_ratio, p.eta * p.n_s * (2.0 * p.n_b + 1.0) * log_ratio * log_ratio};
}

DivergencePair qi_leading_order_ns(const IlluminationParams& p) {
  p.validate(Transmitter::qi);
  const double d = p.eta * p.n_s / (1.0 - p.eta) * std::log1p((1.0 - p.eta) / p.n_b);
  return {d, d * d};
}

DivergencePair qi_leading_order_nb(const IlluminationParams& p) {
  p.validate(Transmitter::qi);
  if (!(p.n_s > 0.0)) {
    throw std::invalid_argument("the large-N_B expansion needs N_S > 0");
  }
  const double log_ratio = std::log1p(1.0 / p.n_s);
  const double base = p.eta * p.n_s * (p.n_s + 1.0) / p.n_b;
  return {base * log_ratio, base * (2.0 * p.n_s + 1.0) * log_ratio * log_ratio};
}

DivergencePair exact_divergences(const HypothesisPair& pair, const NumericsSettings& settings) {
  const auto report = divergences(pair.null_state, pair.alt_state, settings);
  return {report.relative_entropy, report.variance};
}

std::vector<DivergencePair> evaluate_grid(Transmitter t, std::span<const IlluminationParams> grid,
                                          const NumericsSettings& settings, unsigned max_threads) {
  std::vector<DivergencePair> results(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        results[i] = exact_divergences(make_pair(t, grid[i]), settings);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = max_threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : max_threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::vector<SweepRow> comparison_sweep(const IlluminationParams& p,
                                       std::span<const std::int64_t> trials,
                                       std::span<const Transmitter> transmitters,
                                       const NumericsSettings& settings) {
  std::vector<SweepRow> rows;
  for (Transmitter t : transmitters) {
    const auto dv = exact_divergences(make_pair(t, p), settings);
    for (const auto& point :
         exponent_curve(dv.relative_entropy, dv.variance, p.epsilon, trials)) {
      rows.push_back({t, p, point.trials, dv.relative_entropy, dv.variance, point.r_first,
                      point.r_second});
    }
  }
  return rows;
}

std::optional<std::int64_t> crossover_trials(const DivergencePair& challenger,
                                             double incumbent_exponent, double epsilon,
                                             std::int64_t m_max) {
  const double z = inverse_normal_cdf(epsilon);
  auto exceeds = [&](std::int64_t m) {
    return gaussian_approx_exponent(challenger.relative_entropy, challenger.variance, epsilon, m)
               .r_second > incumbent_exponent;
  };
  if (m_max < 1) return std::nullopt;
  if (z >= 0.0 || challenger.variance == 0.0) {
    // R_second is non-increasing in M here, so M = 1 is the only candidate.
    if (exceeds(1)) return std::int64_t{1};
    return std::nullopt;
  }
  const double gap = challenger.relative_entropy - incumbent_exponent;
  if (!(gap > 0.0)) return std::nullopt;
  // R_second > incumbent  <=>  M > V z^2 / gap^2.
  const double threshold = challenger.variance * z * z / (gap * gap);
  if (threshold >= static_cast<double>(m_max)) return std::nullopt;
  auto m = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(threshold)) + 1);
  while (m > 1 && exceeds(m - 1)) --m;
  while (m <= m_max && !exceeds(m)) ++m;
  if (m > m_max) return std::nullopt;
  return m;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "# R_second = D + sqrt(V/M)*Phi^-1(epsilon); O(ln M) term excluded\n";
  os << "transmitter,n_s,n_b,eta,epsilon,M,D,V,R_first,R_second\n";
  for (const auto& row : rows) {
    os << to_string(row.transmitter) << ',' << format_significant(row.params.n_s) << ','
       << format_significant(row.params.n_b) << ',' << format_significant(row.params.eta) << ','
       << format_significant(row.params.epsilon) << ',' << row.trials << ','
       << format_significant(row.relative_entropy) << ',' << format_significant(row.variance)
       << ',' << format_significant(row.r_first) << ',' << format_significant(row.r_second)
       << '\n';
  }
}

}  // namespace gstein
