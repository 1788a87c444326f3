#include "gstein/fock_oracle.hpp"

#include "gstein/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gstein {
namespace {

void require_cutoff(int cutoff, const char* what) {
  if (cutoff < 2) {
    throw std::invalid_argument(std::string(what) + " needs cutoff >= 2, got " +
                                std::to_string(cutoff));
  }
}

int padding_for(int cutoff) { return std::max(20, cutoff); }

CMatrix ladder(int d) {
  CMatrix a = CMatrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

void check_budget(double deficit, const char* what, int cutoff, const NumericsSettings& settings) {
  if (deficit > settings.truncation_budget) {
    std::ostringstream os;
    os << what << ": cutoff " << cutoff << " discards probability " << deficit
       << " (budget " << settings.truncation_budget << ")";
    throw CutoffTooSmallError(os.str(), deficit);
  }
}

FockOperator normalised(CMatrix m, int cutoff, int n_modes, const char* what,
                        const NumericsSettings& settings) {
  const double trace = m.trace().real();
  const double deficit = std::max(0.0, 1.0 - trace);
  check_budget(deficit, what, cutoff, settings);
  m /= trace;
  return {cutoff, n_modes, 0.5 * (m + m.adjoint()), deficit};
}

// Real tridiagonal generator for a two-mode sector, exponentiated.
Matrix sector_unitary(const std::vector<double>& couplings) {
  const auto size = static_cast<Eigen::Index>(couplings.size() + 1);
  Matrix g = Matrix::Zero(size, size);
  for (Eigen::Index m = 0; m + 1 < size; ++m) {
    g(m + 1, m) = couplings[m];
    g(m, m + 1) = -couplings[m];
  }
  return g.exp();
}

// Beamsplitter block for total photon number N in basis |m, N - m>.
Matrix beamsplitter_sector(double theta, int total) {
  std::vector<double> couplings(total);
  for (int m = 0; m < total; ++m) couplings[m] = theta * std::sqrt((m + 1.0) * (total - m));
  return sector_unitary(couplings);
}

double beamsplitter_angle(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("beamsplitter transmissivity must lie in [0, 1]");
  }
  return std::acos(std::sqrt(eta));
}

}  // namespace

FockOperator annihilation(int cutoff) {
  require_cutoff(cutoff, "annihilation");
  return {cutoff, 1, ladder(cutoff), 0.0};
}

FockOperator position_quadrature(int cutoff) {
  const CMatrix a = annihilation(cutoff).matrix;
  return {cutoff, 1, (a + a.adjoint()) / std::sqrt(2.0), 0.0};
}

FockOperator momentum_quadrature(int cutoff) {
  const CMatrix a = annihilation(cutoff).matrix;
  return {cutoff, 1, Complex(0.0, -1.0) * (a - a.adjoint()) / std::sqrt(2.0), 0.0};
}

FockOperator embed(const FockOperator& single_mode, int mode, int n_modes) {
  if (single_mode.n_modes != 1 || mode < 0 || mode >= n_modes) {
    throw std::invalid_argument("embed needs a single-mode operator and a valid mode index");
  }
  const int d = single_mode.cutoff;
  CMatrix out = CMatrix::Identity(1, 1);
  for (int k = 0; k < n_modes; ++k) {
    const CMatrix factor = k == mode ? single_mode.matrix : CMatrix::Identity(d, d);
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return {d, n_modes, std::move(out), 0.0};
}

FockOperator tensor(const FockOperator& a, const FockOperator& b) {
  if (a.cutoff != b.cutoff) throw std::invalid_argument("tensor needs equal cutoffs");
  return {a.cutoff, a.n_modes + b.n_modes, Eigen::kroneckerProduct(a.matrix, b.matrix).eval(),
          a.trace_deficit + b.trace_deficit};
}

int thermal_cutoff_for(double n_mean, double budget) {
  if (!(n_mean >= 0.0)) throw std::invalid_argument("mean photon number must be >= 0");
  if (n_mean == 0.0) return 2;
  const double q = n_mean / (n_mean + 1.0);
  // Lost weight after d levels is q^d.
  return std::max(2, static_cast<int>(std::ceil(std::log(budget) / std::log(q))));
}

FockOperator thermal_dm(double n_mean, int cutoff, const NumericsSettings& settings) {
  require_cutoff(cutoff, "thermal_dm");
  if (!(n_mean >= 0.0) || !std::isfinite(n_mean)) {
    throw std::invalid_argument("thermal_dm needs a finite mean photon number >= 0");
  }
  CMatrix rho = CMatrix::Zero(cutoff, cutoff);
  const double q = n_mean / (n_mean + 1.0);
  double weight = 1.0 / (n_mean + 1.0);
  for (int n = 0; n < cutoff; ++n) {
    rho(n, n) = weight;
    weight *= q;
  }
  return normalised(std::move(rho), cutoff, 1, "thermal_dm", settings);
}

FockOperator displacement(Complex alpha, int cutoff) {
  require_cutoff(cutoff, "displacement");
  const int padded = cutoff + padding_for(cutoff);
  const CMatrix a = ladder(padded);
  const CMatrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
  const CMatrix u = generator.exp();
  return {cutoff, 1, u.topLeftCorner(cutoff, cutoff), 0.0};
}

FockOperator two_mode_squeezer(double r, int cutoff) {
  require_cutoff(cutoff, "two_mode_squeezer");
  const int d = cutoff;
  const int padded = d + padding_for(d);
  CMatrix u = CMatrix::Zero(d * d, d * d);
  // Sector k = n_a - n_b, basis |m + k, m> (k >= 0) or |m, m - k> (k < 0).
  for (int k = -(d - 1); k <= d - 1; ++k) {
    const int shift = std::abs(k);
    const int size = padded - shift;
    std::vector<double> couplings(size - 1);
    for (int m = 0; m + 1 < size; ++m) couplings[m] = r * std::sqrt((m + shift + 1.0) * (m + 1.0));
    const Matrix block = sector_unitary(couplings);
    const int kept = d - shift;
    auto index = [&](int m) { return k >= 0 ? (m + k) * d + m : m * d + (m - k); };
    for (int i = 0; i < kept; ++i) {
      for (int j = 0; j < kept; ++j) u(index(i), index(j)) = block(i, j);
    }
  }
  return {d, 2, std::move(u), 0.0};
}

FockOperator beamsplitter(double eta, int cutoff) {
  require_cutoff(cutoff, "beamsplitter");
  const double theta = beamsplitter_angle(eta);
  const int d = cutoff;
  CMatrix u = CMatrix::Zero(d * d, d * d);
  for (int total = 0; total <= 2 * (d - 1); ++total) {
    const Matrix block = beamsplitter_sector(theta, total);
    for (int i = 0; i <= total; ++i) {
      if (i >= d || total - i >= d) continue;
      for (int j = 0; j <= total; ++j) {
        if (j >= d || total - j >= d) continue;
        u(i * d + (total - i), j * d + (total - j)) = block(i, j);
      }
    }
  }
  return {d, 2, std::move(u), 0.0};
}

FockOperator tmsv_dm(double n_s, int cutoff, const NumericsSettings& settings) {
  if (!(n_s >= 0.0)) throw std::invalid_argument("tmsv_dm needs N_S >= 0");
  const double r = std::asinh(std::sqrt(n_s));
  const CVector psi = two_mode_squeezer(r, cutoff).matrix.col(0);
  return normalised(psi * psi.adjoint(), cutoff, 2, "tmsv_dm", settings);
}

FockOperator qi_alternative_dm(const IlluminationParams& p, int cutoff, int bath_cutoff,
                               const NumericsSettings& settings) {
  p.validate(Transmitter::qi);
  require_cutoff(cutoff, "qi_alternative_dm");
  const int d = cutoff;
  const double bath_photons = p.n_b / (1.0 - p.eta);
  const int db = bath_cutoff > 0
                     ? bath_cutoff
                     : std::max(d, thermal_cutoff_for(bath_photons, 0.1 * settings.truncation_budget));

  // Signal (x) idler amplitudes psi(s, i).
  const CVector psi = two_mode_squeezer(std::asinh(std::sqrt(p.n_s)), d).matrix.col(0);
  const double theta = beamsplitter_angle(p.eta);
  const int max_total = (d - 1) + (db - 1);
  std::vector<Matrix> blocks;
  blocks.reserve(max_total + 1);
  for (int total = 0; total <= max_total; ++total) blocks.push_back(beamsplitter_sector(theta, total));

  // The bath enters unnormalised so that its truncation loss is tracked too.
  const double q = bath_photons / (bath_photons + 1.0);
  const int out_bath = max_total + 1;
  CMatrix rho = CMatrix::Zero(d * d, d * d);
  CMatrix chi(d * d, out_bath);
  double weight = 1.0 / (bath_photons + 1.0);
  for (int k = 0; k < db; ++k, weight *= q) {
    chi.setZero();
    for (int s = 0; s < d; ++s) {
      const int total = s + k;
      const Matrix& block = blocks[total];
      for (int r = 0; r < d && r <= total; ++r) {
        const double amp = block(r, s);
        const int b_out = total - r;
        for (int i = 0; i < d; ++i) chi(r * d + i, b_out) += amp * psi(s * d + i);
      }
    }
    rho.noalias() += weight * chi * chi.adjoint();
  }
  return normalised(std::move(rho), d, 2, "qi_alternative_dm", settings);
}

Moments extract_moments(const FockOperator& rho) {
  const int n = rho.n_modes;
  std::vector<CMatrix> x;
  x.reserve(2 * n);
  for (int k = 0; k < n; ++k) x.push_back(embed(position_quadrature(rho.cutoff), k, n).matrix);
  for (int k = 0; k < n; ++k) x.push_back(embed(momentum_quadrature(rho.cutoff), k, n).matrix);

  Moments m{Vector(2 * n), Matrix(2 * n, 2 * n)};
  std::vector<CMatrix> rho_x;
  rho_x.reserve(2 * n);
  for (int j = 0; j < 2 * n; ++j) {
    rho_x.push_back(rho.matrix * x[j]);
    m.mean(j) = rho_x[j].trace().real();
  }
  for (int j = 0; j < 2 * n; ++j) {
    for (int k = j; k < 2 * n; ++k) {
      // (1/2)<{x_j, x_k}> = Re Tr{rho x_j x_k} for Hermitian x_j, x_k.
      const double second = (rho_x[j].cwiseProduct(x[k].transpose())).sum().real();
      m.cov(j, k) = m.cov(k, j) = second - m.mean(j) * m.mean(k);
    }
  }
  return m;
}

ScenarioDensityMatrices build_thermal_pair_dm(double n_rho, double n_sigma, int cutoff,
                                              const NumericsSettings& settings) {
  return {thermal_dm(n_rho, cutoff, settings), thermal_dm(n_sigma, cutoff, settings), 0};
}

ScenarioDensityMatrices build_scenario_dm(const HypothesisPair& pair, int cutoff,
                                          const NumericsSettings& settings) {
  const auto& p = pair.params;
  if (pair.transmitter == Transmitter::coherent) {
    p.validate(Transmitter::coherent);
    FockOperator rho = thermal_dm(p.n_b, cutoff, settings);
    // <q> = sqrt(2) Re alpha = sqrt(2 eta N_S).
    const CMatrix u = displacement(Complex(std::sqrt(p.eta * p.n_s), 0.0), cutoff).matrix;
    // Undo the thermal renormalisation so the displaced loss is measured in full.
    const CMatrix raw = u * (rho.matrix * (1.0 - rho.trace_deficit)) * u.adjoint();
    FockOperator sigma = normalised(raw, cutoff, 1, "displaced thermal", settings);
    return {std::move(rho), std::move(sigma), 0};
  }
  FockOperator rho = tensor(thermal_dm(p.n_b, cutoff, settings), thermal_dm(p.n_s, cutoff, settings));
  const double bath_photons = p.n_b / (1.0 - p.eta);
  const int db = std::max(cutoff, thermal_cutoff_for(bath_photons, 0.1 * settings.truncation_budget));
  FockOperator sigma = qi_alternative_dm(p, cutoff, db, settings);
  return {std::move(rho), std::move(sigma), db};
}

OracleResult oracle_divergences(const FockOperator& rho, const FockOperator& sigma,
                                const NumericsSettings& settings) {
  if (rho.matrix.rows() != sigma.matrix.rows() || rho.matrix.rows() != rho.matrix.cols() ||
      sigma.matrix.rows() != sigma.matrix.cols()) {
    throw std::invalid_argument("oracle_divergences needs square operators of equal dimension");
  }
  for (const FockOperator* op : {&rho, &sigma}) {
    const double herm = max_abs(CMatrix(op->matrix - op->matrix.adjoint()));
    if (herm > 1e-10) {
      std::ostringstream os;
      os << "density matrix is not Hermitian (residual " << herm << ")";
      throw OracleUnreliableError(os.str());
    }
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> er(rho.matrix);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sigma.matrix);
  if (er.info() != Eigen::Success || es.info() != Eigen::Success) {
    throw OracleUnreliableError("eigendecomposition of a density matrix failed");
  }
  for (const auto* ev : {&er.eigenvalues(), &es.eigenvalues()}) {
    if (ev->minCoeff() < -1e-10) {
      std::ostringstream os;
      os << "density matrix is not positive semidefinite (min eigenvalue " << ev->minCoeff() << ")";
      throw OracleUnreliableError(os.str());
    }
  }

  OracleResult result;
  const Eigen::Index dim = rho.matrix.rows();
  Vector log_sigma(dim);
  std::vector<Eigen::Index> clamped;
  for (Eigen::Index j = 0; j < dim; ++j) {
    double lambda = es.eigenvalues()(j);
    if (lambda < settings.eig_floor) {
      lambda = settings.eig_floor;
      clamped.push_back(j);
    }
    log_sigma(j) = std::log(lambda);
  }
  result.clamped_sigma = static_cast<int>(clamped.size());
  for (Eigen::Index j : clamped) {
    const CVector v = es.eigenvectors().col(j);
    result.rho_weight_on_clamped_sigma += (v.adjoint() * rho.matrix * v)(0, 0).real();
  }
  if (result.rho_weight_on_clamped_sigma > settings.clamp_weight_budget) {
    std::ostringstream os;
    os << "sigma is numerically rank deficient where rho has weight "
       << result.rho_weight_on_clamped_sigma << " (" << result.clamped_sigma
       << " eigenvalues below " << settings.eig_floor << ")";
    throw OracleUnreliableError(os.str());
  }

  Vector p(dim), log_p(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double lambda = er.eigenvalues()(i);
    p(i) = std::max(lambda, 0.0);
    if (lambda < settings.eig_floor) ++result.clamped_rho;
    log_p(i) = std::log(std::max(lambda, settings.eig_floor));
  }

  // ln sigma expressed in the eigenbasis of rho.
  const CMatrix overlap = er.eigenvectors().adjoint() * es.eigenvectors();
  CMatrix log_ratio = -(overlap * log_sigma.cast<Complex>().asDiagonal() * overlap.adjoint());
  log_ratio.diagonal() += log_p.cast<Complex>();

  double d = 0.0;
  double second = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (p(i) == 0.0) continue;
    d += p(i) * log_ratio(i, i).real();
    second += p(i) * log_ratio.col(i).squaredNorm();
  }
  result.relative_entropy = d;
  result.variance = second - d * d;
  return result;
}

}  // namespace gstein
