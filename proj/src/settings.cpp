#include "gstein/settings.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace gstein {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_positive(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !(value > 0.0)) {
    throw std::invalid_argument("tolerance '" + std::string(key) +
                                "' needs a positive number, got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

void NumericsSettings::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("tolerance override must be key=value, got '" +
                                std::string(assignment) + "'");
  }
  const auto key = trim(assignment.substr(0, eq));
  const auto value = parse_positive(key, trim(assignment.substr(eq + 1)));

  const std::pair<std::string_view, double NumericsSettings::*> fields[] = {
      {"symmetry_tol", &NumericsSettings::symmetry_tol},
      {"validity_tol", &NumericsSettings::validity_tol},
      {"pure_tol", &NumericsSettings::pure_tol},
      {"pairing_tol", &NumericsSettings::pairing_tol},
      {"imag_tol", &NumericsSettings::imag_tol},
      {"symplectic_tol", &NumericsSettings::symplectic_tol},
      {"reconstruction_tol", &NumericsSettings::reconstruction_tol},
      {"mean_zero_tol", &NumericsSettings::mean_zero_tol},
      {"standard_form_slack", &NumericsSettings::standard_form_slack},
      {"truncation_budget", &NumericsSettings::truncation_budget},
      {"eig_floor", &NumericsSettings::eig_floor},
      {"clamp_weight_budget", &NumericsSettings::clamp_weight_budget},
  };
  for (const auto& [name, member] : fields) {
    if (name == key) {
      this->*member = value;
      return;
    }
  }
  throw std::invalid_argument("unknown tolerance key '" + std::string(key) + "'");
}

void NumericsSettings::apply_overrides(std::string_view list) {
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = trim(list.substr(0, comma));
    if (!item.empty()) apply_override(item);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
}

std::string NumericsSettings::to_string() const {
  std::ostringstream os;
  os.precision(3);
  os << "symmetry_tol=" << symmetry_tol << ",validity_tol=" << validity_tol
     << ",pure_tol=" << pure_tol << ",pairing_tol=" << pairing_tol << ",imag_tol=" << imag_tol
     << ",symplectic_tol=" << symplectic_tol << ",reconstruction_tol=" << reconstruction_tol
     << ",mean_zero_tol=" << mean_zero_tol << ",standard_form_slack=" << standard_form_slack
     << ",truncation_budget=" << truncation_budget << ",eig_floor=" << eig_floor
     << ",clamp_weight_budget=" << clamp_weight_budget;
  return os.str();
}

}  // namespace gstein
