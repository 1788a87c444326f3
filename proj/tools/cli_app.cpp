#include "cli_app.hpp"

#include "gstein/divergence.hpp"
#include "gstein/errors.hpp"
#include "gstein/fock_oracle.hpp"
#include "gstein/format.hpp"
#include "gstein/illumination.hpp"
#include "gstein/state_io.hpp"
#include "gstein/stein.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace gstein::cli {
namespace {

using nlohmann::ordered_json;

constexpr const char* exit_code_help =
    "Exit codes:\n"
    "  0  success\n"
    "  1  internal numerical failure\n"
    "  2  bad input (flags, state file parse or validation)\n"
    "  3  sigma lacks full support, or rho is outside a route's domain\n"
    "  4  oracle-check mismatch beyond tolerance\n"
    "  5  oracle unreliable (cutoff too small, rank deficiency)\n"
    "\n"
    "Tolerances: GAUSS_STEIN_TOL=key=value[,key=value...] and repeated --tol key=value\n"
    "(flags win). Keys: symmetry_tol validity_tol pure_tol pairing_tol imag_tol\n"
    "symplectic_tol reconstruction_tol mean_zero_tol standard_form_slack\n"
    "truncation_budget eig_floor clamp_weight_budget\n";

enum class Format { csv, json };

Format format_for(const std::string& path, Format fallback, bool csv_allowed) {
  if (path.empty()) return fallback;
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".json") return Format::json;
  if (ext == ".csv" && csv_allowed) return Format::csv;
  throw std::invalid_argument("cannot infer output format from '" + path + "' (use " +
                              (csv_allowed ? ".csv or .json" : ".json") + ")");
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
  file << text;
}

ordered_json optional_matrix(const std::optional<Matrix>& m) {
  return m ? ordered_json(matrix_to_json(*m)) : ordered_json(nullptr);
}

ordered_json report_to_json(const DivergenceReport& r) {
  ordered_json j;
  j["relative_entropy"] = r.relative_entropy;
  j["variance"] = r.variance;
  j["formula_route"] = std::string(to_string(r.formula_route));
  j["entropy_route"] = std::string(to_string(r.entropy_route));
  j["gamma"] = vector_to_json(r.gamma);
  j["gamma_norm"] = r.gamma_norm ? ordered_json(*r.gamma_norm) : ordered_json(nullptr);
  j["g_rho"] = optional_matrix(r.g_rho);
  j["g_sigma"] = matrix_to_json(r.g_sigma);
  j["z_rho"] = r.z_rho;
  j["z_sigma"] = r.z_sigma;
  j["nu_rho"] = vector_to_json(r.nu_rho);
  j["nu_sigma"] = vector_to_json(r.nu_sigma);
  return j;
}

ordered_json params_to_json(const IlluminationParams& p) {
  return {{"n_s", p.n_s}, {"n_b", p.n_b}, {"eta", p.eta}, {"epsilon", p.epsilon}};
}

struct Common {
  std::vector<std::string> tol;
  std::string out;
};

NumericsSettings settings_from(const Common& c, const std::string* tol_env) {
  NumericsSettings s;
  std::string env;
  if (tol_env) {
    env = *tol_env;
  } else if (const char* v = std::getenv("GAUSS_STEIN_TOL")) {
    env = v;
  }
  if (!env.empty()) s.apply_overrides(env);
  for (const auto& t : c.tol) s.apply_override(t);
  return s;
}

void add_common(CLI::App* sub, Common& c, const char* out_help) {
  sub->add_option("--tol", c.tol, "Tolerance override key=value (repeatable)");
  sub->add_option("-o,--out", c.out, out_help);
}

// --- divergence ---------------------------------------------------------

struct DivergenceArgs {
  Common common;
  std::string rho;
  std::string sigma;
};

int cmd_divergence(const DivergenceArgs& a, const NumericsSettings& s, std::ostream& out) {
  format_for(a.common.out, Format::json, false);
  const GaussianState rho = read_state_file(a.rho);
  const GaussianState sigma = read_state_file(a.sigma);
  const DivergenceReport r = divergences(rho, sigma, s);
  ordered_json j;
  j["rho"] = a.rho;
  j["sigma"] = a.sigma;
  j["n_modes"] = rho.n_modes();
  j.update(report_to_json(r));
  emit(a.common.out, j.dump(2) + "\n", out);
  return exit_ok;
}

// --- validate -----------------------------------------------------------

struct ValidateArgs {
  Common common;
  std::string state;
};

int cmd_validate(const ValidateArgs& a, const NumericsSettings& s, std::ostream& out) {
  format_for(a.common.out, Format::json, false);
  const GaussianState state = read_state_file(a.state);
  const ValidationReport r = validate(state, s.validity_tol, s);
  ordered_json j;
  j["state"] = a.state;
  j["n_modes"] = state.n_modes();
  j["valid"] = r.valid;
  j["symmetry_residual"] = r.symmetry_residual;
  j["min_symplectic_eigenvalue"] = r.min_symplectic_eigenvalue
                                       ? ordered_json(*r.min_symplectic_eigenvalue)
                                       : ordered_json(nullptr);
  j["message"] = r.message;
  emit(a.common.out, j.dump(2) + "\n", out);
  return r.valid ? exit_ok : exit_input;
}

// --- illumination -------------------------------------------------------

struct IlluminationArgs {
  Common common;
  std::string transmitter = "both";
  IlluminationParams params{0.01, 20.0, 0.01, 0.01};
  std::int64_t m_max = 1000000;
  int m_points = 61;
};

int cmd_illumination(const IlluminationArgs& a, const NumericsSettings& s, std::ostream& out) {
  const Format fmt = format_for(a.common.out, Format::csv, true);
  std::vector<Transmitter> transmitters;
  if (a.transmitter == "both") {
    transmitters = {Transmitter::coherent, Transmitter::qi};
  } else {
    transmitters = {parse_transmitter(a.transmitter)};
  }
  for (Transmitter t : transmitters) a.params.validate(t);
  const auto trials = log_spaced_trials(a.m_max, a.m_points);
  const auto rows = comparison_sweep(a.params, trials, transmitters, s);

  std::ostringstream os;
  if (fmt == Format::csv) {
    write_sweep_csv(os, rows);
  } else {
    ordered_json j;
    j["r_second"] = "D + sqrt(V/M)*Phi^-1(epsilon); O(ln M) term excluded";
    j["params"] = params_to_json(a.params);
    ordered_json list = ordered_json::array();
    for (const auto& r : rows) {
      list.push_back({{"transmitter", std::string(to_string(r.transmitter))},
                      {"M", r.trials},
                      {"D", r.relative_entropy},
                      {"V", r.variance},
                      {"R_first", r.r_first},
                      {"R_second", r.r_second}});
    }
    j["rows"] = std::move(list);
    os << j.dump(2) << "\n";
  }
  emit(a.common.out, os.str(), out);
  return exit_ok;
}

// --- exponent -----------------------------------------------------------

struct ExponentArgs {
  Common common;
  std::optional<double> relative_entropy;
  std::optional<double> variance;
  std::string rho;
  std::string sigma;
  double epsilon = 0.01;
  std::int64_t m_max = 1000000;
  int m_points = 61;
};

int cmd_exponent(const ExponentArgs& a, const NumericsSettings& s, std::ostream& out) {
  const Format fmt = format_for(a.common.out, Format::csv, true);
  double d = 0.0;
  double v = 0.0;
  if (!a.rho.empty() || !a.sigma.empty()) {
    if (a.rho.empty() || a.sigma.empty() || a.relative_entropy || a.variance) {
      throw std::invalid_argument("give either --rho and --sigma, or --relative-entropy and --variance");
    }
    const DivergenceReport r = divergences(read_state_file(a.rho), read_state_file(a.sigma), s);
    d = r.relative_entropy;
    v = r.variance;
  } else {
    if (!a.relative_entropy || !a.variance) {
      throw std::invalid_argument("give either --rho and --sigma, or --relative-entropy and --variance");
    }
    d = *a.relative_entropy;
    v = *a.variance;
  }
  const auto trials = log_spaced_trials(a.m_max, a.m_points);
  const auto curve = exponent_curve(d, v, a.epsilon, trials);

  std::ostringstream os;
  if (fmt == Format::csv) {
    os << "# R_second = D + sqrt(V/M)*Phi^-1(epsilon); O(ln M) term excluded\n";
    os << "M,epsilon,D,V,R_first,R_second\n";
    for (const auto& p : curve) {
      os << p.trials << ',' << format_significant(p.epsilon) << ',' << format_significant(d) << ','
         << format_significant(v) << ',' << format_significant(p.r_first) << ','
         << format_significant(p.r_second) << '\n';
    }
  } else {
    ordered_json j;
    j["relative_entropy"] = d;
    j["variance"] = v;
    j["epsilon"] = a.epsilon;
    ordered_json list = ordered_json::array();
    for (const auto& p : curve) {
      list.push_back({{"M", p.trials}, {"R_first", p.r_first}, {"R_second", p.r_second}});
    }
    j["points"] = std::move(list);
    os << j.dump(2) << "\n";
  }
  emit(a.common.out, os.str(), out);
  return exit_ok;
}

// --- oracle-check -------------------------------------------------------

struct OracleArgs {
  Common common;
  std::string scenario = "thermal-pair";
  int cutoff = 0;
  std::optional<double> n_s;
  std::optional<double> n_b;
  std::optional<double> eta;
  bool no_doubling = false;
};

struct Scenario {
  std::string name;
  GaussianState rho;
  GaussianState sigma;
  std::optional<HypothesisPair> pair;
  double n_rho = 0.0;
  double n_sigma = 0.0;
  int default_cutoff = 0;
  double tol_d = 0.0;
  double tol_v = 0.0;
  ordered_json inputs;
};

constexpr double whitelist_max_photons = 0.5;
constexpr double stability_tol = 1e-6;

Scenario make_scenario(const OracleArgs& a) {
  auto check_small = [](const char* name, double x) {
    if (!(x >= 0.0 && x <= whitelist_max_photons)) {
      std::ostringstream os;
      os << "oracle-check: " << name << " = " << x << " is outside the small-parameter range [0, "
         << whitelist_max_photons << "]";
      throw std::invalid_argument(os.str());
    }
  };
  if (a.scenario == "thermal-pair") {
    if (a.eta) throw std::invalid_argument("oracle-check: --eta does not apply to thermal-pair");
    const double n_rho = a.n_s.value_or(0.5);
    const double n_sigma = a.n_b.value_or(1.0);
    if (!(n_rho >= 0.0 && n_rho <= 1.0) || !(n_sigma > 0.0 && n_sigma <= 1.0)) {
      throw std::invalid_argument("oracle-check: thermal-pair photon numbers must lie in (0, 1]");
    }
    Scenario s{a.scenario, thermal_state(n_rho), thermal_state(n_sigma), std::nullopt,
               n_rho,      n_sigma,              80,                     1e-5,
               1e-4,       {}};
    s.inputs = {{"n_rho", n_rho}, {"n_sigma", n_sigma}};
    return s;
  }
  const Transmitter t = a.scenario == "coherent" ? Transmitter::coherent
                        : a.scenario == "qi"     ? Transmitter::qi
                                                 : throw std::invalid_argument(
                                                       "oracle-check: unknown scenario '" +
                                                       a.scenario + "' (thermal-pair, coherent, qi)");
  IlluminationParams p = t == Transmitter::coherent ? IlluminationParams{0.2, 0.5, 1.0, 0.01}
                                                    : IlluminationParams{0.2, 0.3, 0.3, 0.01};
  if (a.n_s) p.n_s = *a.n_s;
  if (a.n_b) p.n_b = *a.n_b;
  if (a.eta) p.eta = *a.eta;
  check_small("N_S", p.n_s);
  check_small("N_B", p.n_b);
  HypothesisPair pair = make_pair(t, p);
  const bool coherent = t == Transmitter::coherent;
  Scenario s{a.scenario, pair.null_state, pair.alt_state, pair, 0.0, 0.0,
             coherent ? 60 : 15, coherent ? 1e-5 : 1e-4, coherent ? 1e-4 : 1e-3, {}};
  s.inputs = params_to_json(p);
  s.inputs.erase("epsilon");
  return s;
}

struct OracleRun {
  ScenarioDensityMatrices dm;
  OracleResult result;
};

OracleRun run_oracle(const Scenario& sc, int cutoff, const NumericsSettings& s) {
  ScenarioDensityMatrices dm = sc.pair ? build_scenario_dm(*sc.pair, cutoff, s)
                                       : build_thermal_pair_dm(sc.n_rho, sc.n_sigma, cutoff, s);
  OracleResult r = oracle_divergences(dm.rho, dm.sigma, s);
  return {std::move(dm), r};
}

ordered_json run_to_json(const OracleRun& r) {
  return {{"cutoff", r.dm.rho.cutoff},
          {"bath_cutoff", r.dm.bath_cutoff == 0 ? ordered_json(nullptr) : ordered_json(r.dm.bath_cutoff)},
          {"dimension", r.dm.rho.matrix.rows()},
          {"relative_entropy", r.result.relative_entropy},
          {"variance", r.result.variance},
          {"clamped_rho", r.result.clamped_rho},
          {"clamped_sigma", r.result.clamped_sigma},
          {"rho_weight_on_clamped_sigma", r.result.rho_weight_on_clamped_sigma},
          {"trace_deficit_rho", r.dm.rho.trace_deficit},
          {"trace_deficit_sigma", r.dm.sigma.trace_deficit}};
}

int cmd_oracle_check(const OracleArgs& a, const NumericsSettings& s, std::ostream& out,
                     std::ostream& err) {
  format_for(a.common.out, Format::json, false);
  const Scenario sc = make_scenario(a);
  const int cutoff = a.cutoff > 0 ? a.cutoff : sc.default_cutoff;
  const DivergenceReport formula = divergences(sc.rho, sc.sigma, s);
  const OracleRun base = run_oracle(sc, cutoff, s);
  std::optional<OracleRun> doubled;
  if (!a.no_doubling) doubled = run_oracle(sc, 2 * cutoff, s);

  const double diff_d = std::abs(formula.relative_entropy - base.result.relative_entropy);
  const double diff_v = std::abs(formula.variance - base.result.variance);
  bool pass = diff_d <= sc.tol_d && diff_v <= sc.tol_v;

  ordered_json j;
  j["scenario"] = sc.name;
  j["inputs"] = sc.inputs;
  j["settings"] = {{"truncation_budget", s.truncation_budget},
                   {"eig_floor", s.eig_floor},
                   {"clamp_weight_budget", s.clamp_weight_budget}};
  j["formula"] = {{"relative_entropy", formula.relative_entropy},
                  {"variance", formula.variance},
                  {"formula_route", std::string(to_string(formula.formula_route))}};
  j["oracle"] = run_to_json(base);
  j["oracle_doubled"] = doubled ? run_to_json(*doubled) : ordered_json(nullptr);
  j["differences"] = {{"relative_entropy", diff_d}, {"variance", diff_v}};
  if (doubled) {
    const double sd = std::abs(base.result.relative_entropy - doubled->result.relative_entropy);
    const double sv = std::abs(base.result.variance - doubled->result.variance);
    j["stability"] = {{"relative_entropy", sd}, {"variance", sv}};
    pass = pass && sd <= stability_tol && sv <= stability_tol;
  } else {
    j["stability"] = nullptr;
  }
  j["tolerances"] = {{"relative_entropy", sc.tol_d}, {"variance", sc.tol_v}, {"stability", stability_tol}};
  j["pass"] = pass;
  emit(a.common.out, j.dump(2) + "\n", out);
  if (!pass) {
    err << "oracle-check: " << sc.name << " exceeds tolerance\n";
    return exit_mismatch;
  }
  return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run(args, out, err, nullptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::string* tol_env) {
  CLI::App app{"Relative entropy, relative entropy variance and second-order Stein exponents "
               "of Gaussian states",
               "gauss_stein"};
  app.footer(exit_code_help);
  app.require_subcommand(1);

  DivergenceArgs div;
  auto* sub_div = app.add_subcommand("divergence", "D and V of two Gaussian state files (JSON report)");
  sub_div->add_option("rho", div.rho, "State file for rho")->required();
  sub_div->add_option("sigma", div.sigma, "State file for sigma")->required();
  add_common(sub_div, div.common, "Write the JSON report here instead of stdout");

  ValidateArgs val;
  auto* sub_val = app.add_subcommand("validate", "Check a state file (exit 2 if invalid)");
  sub_val->add_option("state", val.state, "State file")->required();
  add_common(sub_val, val.common, "Write the JSON report here instead of stdout");

  IlluminationArgs ill;
  auto* sub_ill = app.add_subcommand("illumination", "Coherent vs QI exponent sweep over M");
  sub_ill->add_option("--transmitter", ill.transmitter, "coherent, qi or both")
      ->check(CLI::IsMember({"coherent", "qi", "both"}))
      ->capture_default_str();
  sub_ill->add_option("--ns", ill.params.n_s, "Signal mean photon number N_S")->capture_default_str();
  sub_ill->add_option("--nb", ill.params.n_b, "Background mean photon number N_B")->capture_default_str();
  sub_ill->add_option("--eta", ill.params.eta, "Reflectivity eta")->capture_default_str();
  sub_ill->add_option("--epsilon", ill.params.epsilon, "Type-I error bound")->capture_default_str();
  sub_ill->add_option("--m-max", ill.m_max, "Largest number of trials")->capture_default_str();
  sub_ill->add_option("--m-points", ill.m_points, "Points on the log-spaced M grid")
      ->capture_default_str();
  add_common(sub_ill, ill.common, "Output file (.csv or .json); CSV to stdout by default");

  ExponentArgs ex;
  auto* sub_ex = app.add_subcommand("exponent", "Second-order exponent curve from D, V or two states");
  sub_ex->add_option("--relative-entropy", ex.relative_entropy, "D");
  sub_ex->add_option("--variance", ex.variance, "V");
  sub_ex->add_option("--rho", ex.rho, "State file for rho");
  sub_ex->add_option("--sigma", ex.sigma, "State file for sigma");
  sub_ex->add_option("--epsilon", ex.epsilon, "Type-I error bound")->capture_default_str();
  sub_ex->add_option("--m-max", ex.m_max, "Largest number of trials")->capture_default_str();
  sub_ex->add_option("--m-points", ex.m_points, "Points on the log-spaced M grid")
      ->capture_default_str();
  add_common(sub_ex, ex.common, "Output file (.csv or .json); CSV to stdout by default");

  OracleArgs orc;
  auto* sub_orc = app.add_subcommand("oracle-check", "Compare formulas with the Fock-space oracle");
  sub_orc->add_option("--scenario", orc.scenario, "thermal-pair, coherent or qi")
      ->capture_default_str();
  sub_orc->add_option("--cutoff", orc.cutoff,
                      "Levels per mode (default 80 thermal-pair, 60 coherent, 15 qi)");
  sub_orc->add_option("--ns", orc.n_s, "N_S (thermal-pair: photons in rho), at most 0.5");
  sub_orc->add_option("--nb", orc.n_b, "N_B (thermal-pair: photons in sigma), at most 0.5");
  sub_orc->add_option("--eta", orc.eta, "eta");
  sub_orc->add_flag("--no-doubling", orc.no_doubling, "Skip the cutoff-doubling stability run");
  add_common(sub_orc, orc.common, "Write the JSON report here instead of stdout");

  // CLI11 consumes a reversed argument list without the program name.
  std::vector<std::string> rest;
  for (auto it = args.rbegin(); args.size() > 1 && it != args.rend() - 1; ++it) rest.push_back(*it);
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*sub_div) return cmd_divergence(div, settings_from(div.common, tol_env), out);
    if (*sub_val) return cmd_validate(val, settings_from(val.common, tol_env), out);
    if (*sub_ill) return cmd_illumination(ill, settings_from(ill.common, tol_env), out);
    if (*sub_ex) return cmd_exponent(ex, settings_from(ex.common, tol_env), out);
    return cmd_oracle_check(orc, settings_from(orc.common, tol_env), out, err);
  } catch (const NotFullSupportError& e) {
    err << "error: " << e.what() << "\n";
    return exit_support;
  } catch (const PureStateDomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_support;
  } catch (const OracleUnreliableError& e) {
    err << "oracle unreliable: " << e.what() << "\n";
    return exit_oracle;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_failure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace gstein::cli
