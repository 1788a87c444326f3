#include "gstein/divergence.hpp"

#include "gstein/errors.hpp"
#include "gstein/symplectic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gstein {
namespace {

// Williamson data and G matrix of one state.
struct Analysis {
  WilliamsonDecomposition w;
  bool pure = false;
  double min_nu = 0.0;
  std::optional<Matrix> G;
};

Analysis analyse(const GaussianState& state, const NumericsSettings& settings) {
  Analysis a{williamson(state.cov(), settings), false, 0.0, std::nullopt};
  a.min_nu = a.w.nu.minCoeff();
  a.pure = a.min_nu <= 0.5 + settings.pure_tol;
  if (!a.pure) a.G = g_matrix(a.w, settings);
  return a;
}

void check_pair(const GaussianState& rho, const GaussianState& sigma,
                const NumericsSettings& settings) {
  if (rho.n_modes() != sigma.n_modes()) {
    std::ostringstream os;
    os << "mode count mismatch: rho has " << rho.n_modes() << " modes, sigma has "
       << sigma.n_modes();
    throw std::invalid_argument(os.str());
  }
  require_valid(rho, "rho", settings);
  require_valid(sigma, "sigma", settings);
}

Analysis analyse_sigma(const GaussianState& sigma, const NumericsSettings& settings) {
  Analysis a = analyse(sigma, settings);
  if (a.pure) {
    std::ostringstream os;
    os.precision(17);
    Eigen::Index idx = 0;
    a.w.nu.minCoeff(&idx);
    os << "sigma does not have full support: symplectic eigenvalue nu_" << (idx + 1) << " = "
       << a.min_nu << " is within " << settings.pure_tol << " of 1/2";
    throw NotFullSupportError(os.str(), a.min_nu);
  }
  return a;
}

[[noreturn]] void throw_pure_rho(const Analysis& rho, const char* what) {
  std::ostringstream os;
  os.precision(17);
  os << what << " needs full-rank rho, but rho has symplectic eigenvalue " << rho.min_nu;
  throw PureStateDomainError(os.str(), rho.min_nu);
}

bool is_zero_mean(const GaussianState& s, const NumericsSettings& settings) {
  return s.mean().norm() <= settings.mean_zero_tol;
}

double entropy_partition(const GaussianState& rho, const GaussianState& sigma, const Analysis& ar,
                         const Analysis& as) {
  const Vector gamma = rho.mean() - sigma.mean();
  const Matrix Gamma = *ar.G - *as.G;
  const double log_ratio = log_partition_function(as.w) - log_partition_function(ar.w);
  const double trace = (Gamma * rho.cov()).trace();
  return 0.5 * (log_ratio - trace + gamma.dot(*as.G * gamma));
}

double entropy_g_form(const GaussianState& rho, const GaussianState& sigma, const Analysis& ar,
                      const Analysis& as) {
  const Vector gamma = rho.mean() - sigma.mean();
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < ar.w.nu.size(); ++i) entropy += thermal_entropy(ar.w.nu(i) - 0.5);
  return 0.5 * (log_partition_function(as.w) + (*as.G * rho.cov()).trace() +
                gamma.dot(*as.G * gamma)) -
         entropy;
}

double variance_general(const GaussianState& rho, const GaussianState& sigma, const Analysis& ar,
                        const Analysis& as) {
  const Vector gamma = rho.mean() - sigma.mean();
  const Matrix Gamma = *ar.G - *as.G;
  const Matrix Om = omega(rho.n_modes());
  const Matrix gv = Gamma * rho.cov();
  const Matrix go = Gamma * Om;
  const Vector shifted = *as.G * gamma;
  return 0.5 * (gv * gv).trace() + 0.125 * (go * go).trace() + shifted.dot(rho.cov() * shifted);
}

double variance_alternate(const Analysis& ar, const Analysis& as,
                          const NumericsSettings& settings) {
  const int n = ar.w.n_modes();
  const Vector& nu_r = ar.w.nu;

  // f1 = arcoth^2(2 nu)[(2 nu)^2 - 1] and f2 = arcoth(2 nu)[(2 nu)^2 - 1] both
  // vanish as nu -> 1/2.
  Vector f1(n), f2(n), a_sigma(n);
  for (int i = 0; i < n; ++i) {
    if (nu_r(i) <= 0.5 + settings.pure_tol) {
      f1(i) = 0.0;
      f2(i) = 0.0;
    } else {
      const double a = arcoth(2.0 * nu_r(i));
      const double w = 4.0 * nu_r(i) * nu_r(i) - 1.0;
      f1(i) = a * a * w;
      f2(i) = a * w;
    }
    a_sigma(i) = arcoth(2.0 * as.w.nu(i));
  }

  const Matrix s_tilde = symplectic_inverse(ar.w.S) * as.w.S;
  const Matrix sas = s_tilde * doubled_diagonal(a_sigma) * s_tilde.transpose();
  const Matrix sasd = sas * doubled_diagonal(nu_r);

  const double term1 = f1.sum();
  const double term2 = (doubled_diagonal(f2) * sas).trace();
  const double term3 = 2.0 * (sasd * sasd).trace();
  const double term4 = a_sigma.squaredNorm();
  return term1 - term2 + term3 - term4;
}

}  // namespace

std::string_view to_string(FormulaRoute route) {
  switch (route) {
    case FormulaRoute::general:
      return "general";
    case FormulaRoute::alternate:
      return "alternate";
    case FormulaRoute::standard_form:
      return "standard_form";
    case FormulaRoute::g_form:
      return "g_form";
  }
  return "unknown";
}

double thermal_entropy(double x) {
  if (x <= 0.0) return 0.0;
  return (x + 1.0) * std::log1p(x) - x * std::log(x);
}

double relative_entropy_partition_form(const GaussianState& rho, const GaussianState& sigma,
                                       const NumericsSettings& settings) {
  check_pair(rho, sigma, settings);
  const Analysis as = analyse_sigma(sigma, settings);
  const Analysis ar = analyse(rho, settings);
  if (ar.pure) throw_pure_rho(ar, "partition-form relative entropy");
  return entropy_partition(rho, sigma, ar, as);
}

double relative_entropy_g_form(const GaussianState& rho, const GaussianState& sigma,
                               const NumericsSettings& settings) {
  check_pair(rho, sigma, settings);
  const Analysis as = analyse_sigma(sigma, settings);
  const Analysis ar = analyse(rho, settings);
  return entropy_g_form(rho, sigma, ar, as);
}

double relative_entropy(const GaussianState& rho, const GaussianState& sigma,
                        const NumericsSettings& settings) {
  check_pair(rho, sigma, settings);
  const Analysis as = analyse_sigma(sigma, settings);
  const Analysis ar = analyse(rho, settings);
  return ar.pure ? entropy_g_form(rho, sigma, ar, as) : entropy_partition(rho, sigma, ar, as);
}

double relative_entropy_variance_general(const GaussianState& rho, const GaussianState& sigma,
                                         const NumericsSettings& settings) {
  check_pair(rho, sigma, settings);
  const Analysis as = analyse_sigma(sigma, settings);
  const Analysis ar = analyse(rho, settings);
  if (ar.pure) throw_pure_rho(ar, "general relative entropy variance");
  return variance_general(rho, sigma, ar, as);
}

double relative_entropy_variance_alternate(const GaussianState& rho, const GaussianState& sigma,
                                           const NumericsSettings& settings) {
  check_pair(rho, sigma, settings);
  if (!is_zero_mean(rho, settings) || !is_zero_mean(sigma, settings)) {
    throw std::invalid_argument(
        "alternate relative entropy variance is defined for zero-mean states only");
  }
  const Analysis as = analyse_sigma(sigma, settings);
  const Analysis ar = analyse(rho, settings);
  return variance_alternate(ar, as, settings);
}

double relative_entropy_variance(const GaussianState& rho, const GaussianState& sigma,
                                 const NumericsSettings& settings) {
  return divergences(rho, sigma, settings).variance;
}

DivergenceReport divergences(const GaussianState& rho, const GaussianState& sigma,
                             const NumericsSettings& settings) {
  check_pair(rho, sigma, settings);
  const Analysis as = analyse_sigma(sigma, settings);
  const Analysis ar = analyse(rho, settings);

  DivergenceReport report;
  report.gamma = rho.mean() - sigma.mean();
  report.g_sigma = *as.G;
  report.z_sigma = partition_function(as.w);
  report.z_rho = partition_function(ar.w);
  report.nu_rho = ar.w.nu;
  report.nu_sigma = as.w.nu;

  if (!ar.pure) {
    report.g_rho = ar.G;
    report.gamma_norm = (*ar.G - *as.G).norm();
    report.entropy_route = FormulaRoute::general;
    report.formula_route = FormulaRoute::general;
    report.relative_entropy = entropy_partition(rho, sigma, ar, as);
    report.variance = variance_general(rho, sigma, ar, as);
    return report;
  }

  report.entropy_route = FormulaRoute::g_form;
  report.relative_entropy = entropy_g_form(rho, sigma, ar, as);
  if (!is_zero_mean(rho, settings) || !is_zero_mean(sigma, settings)) {
    std::ostringstream os;
    os.precision(17);
    os << "relative entropy variance for rho with a pure direction (nu = " << ar.min_nu
       << ") is only available for zero-mean states";
    throw PureStateDomainError(os.str(), ar.min_nu);
  }
  report.formula_route = FormulaRoute::alternate;
  report.variance = variance_alternate(ar, as, settings);
  return report;
}

Matrix StandardFormSymplectic::s0() const {
  Matrix m(2, 2);
  m << omega_plus, omega_minus, omega_minus, omega_plus;
  return m;
}

StandardFormSymplectic standard_form_symplectic(const StandardFormParams& p) {
  const double y = (p.a + p.b) * (p.a + p.b) - 4.0 * p.c * p.c;
  const double root_y = std::sqrt(y);
  StandardFormSymplectic out;
  out.nu_minus = 0.5 * (root_y - (p.b - p.a));
  out.nu_plus = 0.5 * (root_y + (p.b - p.a));
  out.omega_plus = std::sqrt((p.a + p.b + root_y) / (2.0 * root_y));
  // (a + b)^2 - y = 4c^2, so w- = |c| / sqrt(y (a + b + sqrt y) / 2) without cancellation.
  const double w_minus = std::abs(p.c) / std::sqrt(0.5 * root_y * (p.a + p.b + root_y));
  out.omega_minus = p.c < 0.0 ? -w_minus : w_minus;
  return out;
}

DivergenceReport standard_form_divergences(const StandardFormParams& rho_p,
                                           const StandardFormParams& sigma_p,
                                           const NumericsSettings& settings) {
  check_standard_form(rho_p, settings.standard_form_slack);
  check_standard_form(sigma_p, settings.standard_form_slack);

  const auto sr = standard_form_symplectic(rho_p);
  const auto ss = standard_form_symplectic(sigma_p);
  const double min_sigma = std::min(ss.nu_minus, ss.nu_plus);
  if (min_sigma <= 0.5 + settings.pure_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "sigma does not have full support: symplectic eigenvalue " << min_sigma
       << " is within " << settings.pure_tol << " of 1/2";
    throw NotFullSupportError(os.str(), min_sigma);
  }
  const double min_rho = std::min(sr.nu_minus, sr.nu_plus);
  if (min_rho <= 0.5 + settings.pure_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "standard-form variance needs full-rank rho, but rho has symplectic eigenvalue "
       << min_rho;
    throw PureStateDomainError(os.str(), min_rho);
  }

  // M = S_0 arcoth(2 D) S_0 with D = diag(nu-, nu+).
  auto block = [](const StandardFormSymplectic& s) {
    Vector a(2);
    a << arcoth(2.0 * s.nu_minus), arcoth(2.0 * s.nu_plus);
    const Matrix s0 = s.s0();
    return Matrix(s0 * a.asDiagonal() * s0);
  };
  const Matrix m_rho = block(sr);
  const Matrix m_sigma = block(ss);
  const Matrix gamma_p = m_rho - m_sigma;
  Matrix z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  const Matrix v0 = rho_p.v0();

  const Matrix zgzv = z * gamma_p * z * v0;
  const Matrix zgzg = z * gamma_p * z * gamma_p;
  const double variance = 4.0 * (zgzv * zgzv).trace() - zgzg.trace();

  const double log_z_sigma = std::log(ss.nu_minus * ss.nu_minus - 0.25) +
                             std::log(ss.nu_plus * ss.nu_plus - 0.25);
  // Tr{G_sigma V^rho} = 4 Tr{sigma_Z M_sigma sigma_Z V_0^rho}.
  const double cross = 4.0 * (z * m_sigma * z * v0).trace();
  const double entropy = 0.5 * (log_z_sigma + cross) - thermal_entropy(sr.nu_plus - 0.5) -
                         thermal_entropy(sr.nu_minus - 0.5);

  // G = -2 Omega T (M (+) M) T Omega with T = I (+) sigma_Z.
  const Matrix Om = omega(2);
  const Matrix T = direct_sum(Matrix::Identity(2, 2), z);
  auto full_g = [&](const Matrix& m) { return Matrix(-2.0 * Om * T * direct_sum(m, m) * T * Om); };

  DivergenceReport report;
  report.relative_entropy = entropy;
  report.variance = variance;
  report.gamma = Vector::Zero(4);
  report.g_rho = full_g(m_rho);
  report.g_sigma = full_g(m_sigma);
  report.gamma_norm = (*report.g_rho - report.g_sigma).norm();
  report.formula_route = FormulaRoute::standard_form;
  report.entropy_route = FormulaRoute::standard_form;
  report.nu_rho = Vector(2);
  report.nu_rho << sr.nu_minus, sr.nu_plus;
  report.nu_sigma = Vector(2);
  report.nu_sigma << ss.nu_minus, ss.nu_plus;
  report.z_rho = (sr.nu_minus * sr.nu_minus - 0.25) * (sr.nu_plus * sr.nu_plus - 0.25);
  report.z_sigma = std::exp(log_z_sigma);
  return report;
}

}  // namespace gstein
