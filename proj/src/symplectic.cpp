#include "gstein/symplectic.hpp"

#include "gstein/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gstein {
namespace {

int modes_of(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    std::ostringstream os;
    os << what << " must be square with even positive dimension, got " << m.rows() << "x"
       << m.cols();
    throw std::invalid_argument(os.str());
  }
  return static_cast<int>(m.rows() / 2);
}

double scale_of(const Matrix& m) { return std::max(1.0, max_abs(m)); }

void require_symmetric(const Matrix& V, const NumericsSettings& settings) {
  const double residual = max_abs(Matrix(V - V.transpose()));
  if (residual > settings.symmetry_tol * scale_of(V)) {
    std::ostringstream os;
    os << "covariance matrix is not symmetric (max |V - V^T| = " << residual << ")";
    throw std::invalid_argument(os.str());
  }
}

void require_not_pure(const Vector& nu, const NumericsSettings& settings) {
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    if (nu(i) <= 0.5 + settings.pure_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "symplectic eigenvalue nu_" << (i + 1) << " = " << nu(i)
         << " is on the pure-state boundary; arcoth(2 nu) diverges";
      throw PureStateDomainError(os.str(), nu(i));
    }
  }
}

Matrix check_mode(int n_modes, int mode, const char* what) {
  if (n_modes < 1 || mode < 0 || mode >= n_modes) {
    throw std::invalid_argument(std::string(what) + ": mode index out of range");
  }
  return Matrix::Identity(2 * n_modes, 2 * n_modes);
}

}  // namespace

SymplecticForm symplectic_form(int n_modes) {
  if (n_modes < 1) {
    throw std::invalid_argument("symplectic_form needs n_modes >= 1, got " +
                                std::to_string(n_modes));
  }
  Matrix m = Matrix::Zero(2 * n_modes, 2 * n_modes);
  m.topRightCorner(n_modes, n_modes).setIdentity();
  m.bottomLeftCorner(n_modes, n_modes) = -Matrix::Identity(n_modes, n_modes);
  return {n_modes, std::move(m)};
}

Matrix omega(int n_modes) { return symplectic_form(n_modes).matrix; }

double arcoth(double x) {
  if (!(std::abs(x) > 1.0)) {
    throw std::domain_error("arcoth is defined for |x| > 1");
  }
  // log1p keeps precision when |x| is large.
  return 0.5 * std::log1p(2.0 / (x - 1.0));
}

WilliamsonDecomposition williamson(const Matrix& V, const NumericsSettings& settings) {
  const int n = modes_of(V, "covariance matrix");
  require_symmetric(V, settings);
  const Matrix Vs = 0.5 * (V + V.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> sym(Vs);
  if (sym.info() != Eigen::Success) {
    throw NumericalFailure("eigendecomposition of V failed", 0.0);
  }
  if (sym.eigenvalues().minCoeff() <= 0.0) {
    std::ostringstream os;
    os << "covariance matrix is not positive definite (min eigenvalue "
       << sym.eigenvalues().minCoeff() << ")";
    throw std::invalid_argument(os.str());
  }
  const Matrix sqrt_v =
      sym.eigenvectors() * sym.eigenvalues().cwiseSqrt().asDiagonal() * sym.eigenvectors().transpose();

  // i V Omega = V^{1/2} H V^{-1/2} with H = i V^{1/2} Omega V^{1/2} Hermitian.
  const Matrix Om = omega(n);
  const Matrix antisym = sqrt_v * Om * sqrt_v;
  const CMatrix H = Complex(0.0, 1.0) * antisym.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> herm(H);
  if (herm.info() != Eigen::Success) {
    throw NumericalFailure("eigendecomposition of i V Omega failed", 0.0);
  }
  const Vector& lambda = herm.eigenvalues();

  const double scale = scale_of(Vs);
  double pairing = 0.0;
  for (int k = 0; k < n; ++k) {
    pairing = std::max(pairing, std::abs(lambda(k) + lambda(2 * n - 1 - k)));
  }
  pairing /= scale;
  if (pairing > settings.pairing_tol || lambda(n) <= 0.0) {
    std::ostringstream os;
    os << "eigenvalues of i V Omega do not form +-nu pairs (residual " << pairing << ")";
    throw NumericalFailure(os.str(), pairing);
  }

  WilliamsonDecomposition out;
  out.nu.resize(n);
  out.S.resize(2 * n, 2 * n);
  const double sqrt2 = std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    const double nu = lambda(n + j);
    out.nu(j) = nu;
    // H w = nu w  =>  i V Omega (V^{1/2} w) = nu (V^{1/2} w), and
    // (V^{1/2} w)^dagger i Omega (V^{1/2} w) = nu.
    CVector e = sqrt_v.cast<Complex>() * herm.eigenvectors().col(n + j) / std::sqrt(nu);

    // Fix the free phase: make the leading large component real and positive,
    // preferring position entries on ties so already-diagonal V gives S = I.
    const double peak = e.cwiseAbs().maxCoeff();
    Eigen::Index anchor = 0;
    while (std::abs(e(anchor)) < (1.0 - 1e-8) * peak) ++anchor;
    e *= std::conj(e(anchor)) / std::abs(e(anchor));

    out.S.col(j) = sqrt2 * e.real();
    out.S.col(n + j) = -sqrt2 * e.imag();
  }

  out.symplectic_residual = max_abs(Matrix(out.S * Om * out.S.transpose() - Om));
  const Matrix rebuilt = out.S * doubled_diagonal(out.nu) * out.S.transpose();
  out.reconstruction_residual = max_abs(Matrix(rebuilt - Vs)) / max_abs(Vs);
  out.pairing_residual = pairing;

  if (out.symplectic_residual > settings.symplectic_tol) {
    std::ostringstream os;
    os << "Williamson S is not symplectic (residual " << out.symplectic_residual << ")";
    throw NumericalFailure(os.str(), out.symplectic_residual);
  }
  if (out.reconstruction_residual > settings.reconstruction_tol) {
    std::ostringstream os;
    os << "Williamson decomposition does not reconstruct V (relative residual "
       << out.reconstruction_residual << ")";
    throw NumericalFailure(os.str(), out.reconstruction_residual);
  }
  return out;
}

Matrix matrix_arcoth_2iVOmega(const Matrix& V, const NumericsSettings& settings) {
  const int n = modes_of(V, "covariance matrix");
  require_symmetric(V, settings);
  const Matrix Om = omega(n);
  const CMatrix X = Complex(0.0, 2.0) * (V * Om).cast<Complex>();

  Eigen::ComplexEigenSolver<CMatrix> ces(X);
  if (ces.info() != Eigen::Success) {
    throw NumericalFailure("eigendecomposition of 2 i V Omega failed", 0.0);
  }
  const CVector& lambda = ces.eigenvalues();
  const double scale = scale_of(V);
  CVector f(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    const Complex l = lambda(k);
    const double imag_residual = std::abs(l.imag()) / scale;
    if (imag_residual > settings.imag_tol) {
      std::ostringstream os;
      os << "2 i V Omega has a non-real eigenvalue " << l.real() << " + " << l.imag() << "i";
      throw NumericalFailure(os.str(), imag_residual);
    }
    const double x = l.real();
    if (std::abs(x) <= 1.0 + 2.0 * settings.pure_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "symplectic eigenvalue " << std::abs(x) / 2.0
         << " is on the pure-state boundary; arcoth(2 i V Omega) is undefined";
      throw PureStateDomainError(os.str(), std::abs(x) / 2.0);
    }
    f(k) = arcoth(x);
  }
  const CMatrix& E = ces.eigenvectors();
  const CMatrix F = E * f.asDiagonal() * E.inverse();

  const double residual = max_abs(Matrix(F.real())) / std::max(1.0, max_abs(Matrix(F.imag())));
  if (residual > settings.imag_tol) {
    std::ostringstream os;
    os << "arcoth(2 i V Omega) is not purely imaginary (residual " << residual << ")";
    throw NumericalFailure(os.str(), residual);
  }
  return F.imag();
}

Matrix g_matrix(const WilliamsonDecomposition& w, const NumericsSettings& settings) {
  require_not_pure(w.nu, settings);
  const int n = w.n_modes();
  Vector a(n);
  for (int i = 0; i < n; ++i) a(i) = arcoth(2.0 * w.nu(i));
  const Matrix Om = omega(n);
  Matrix G = -2.0 * Om * w.S * doubled_diagonal(a) * w.S.transpose() * Om;
  return 0.5 * (G + G.transpose());
}

Matrix g_matrix(const Matrix& V, const NumericsSettings& settings) {
  return g_matrix(williamson(V, settings), settings);
}

Matrix g_matrix_direct(const Matrix& V, const NumericsSettings& settings) {
  const Matrix K = matrix_arcoth_2iVOmega(V, settings);
  // 2 i Omega (i K) = -2 Omega K.
  return -2.0 * omega(static_cast<int>(V.rows() / 2)) * K;
}

double partition_function(const Matrix& V, const NumericsSettings& settings) {
  const int n = modes_of(V, "covariance matrix");
  const CMatrix M = V.cast<Complex>() + Complex(0.0, 0.5) * omega(n).cast<Complex>();
  const Complex det = M.partialPivLu().determinant();
  const double scale = std::max(1.0, std::abs(det));
  if (std::abs(det.imag()) > settings.imag_tol * scale) {
    std::ostringstream os;
    os << "det(V + i Omega/2) has imaginary part " << det.imag();
    throw NumericalFailure(os.str(), std::abs(det.imag()) / scale);
  }
  return det.real();
}

double partition_function(const WilliamsonDecomposition& w) {
  double z = 1.0;
  for (Eigen::Index i = 0; i < w.nu.size(); ++i) z *= (w.nu(i) + 0.5) * (w.nu(i) - 0.5);
  return z;
}

double log_partition_function(const WilliamsonDecomposition& w) {
  double log_z = 0.0;
  for (Eigen::Index i = 0; i < w.nu.size(); ++i) {
    log_z += std::log(w.nu(i) + 0.5) + std::log(w.nu(i) - 0.5);
  }
  return log_z;
}

bool is_symplectic(const Matrix& S, double tol) {
  const int n = modes_of(S, "symplectic candidate");
  const Matrix Om = omega(n);
  return max_abs(Matrix(S * Om * S.transpose() - Om)) <= tol;
}

Matrix symplectic_inverse(const Matrix& S) {
  const Matrix Om = omega(modes_of(S, "symplectic matrix"));
  return -Om * S.transpose() * Om;
}

Matrix rotation_symplectic(int n_modes, int mode, double theta) {
  Matrix S = check_mode(n_modes, mode, "rotation_symplectic");
  const int q = mode;
  const int p = n_modes + mode;
  S(q, q) = std::cos(theta);
  S(q, p) = std::sin(theta);
  S(p, q) = -std::sin(theta);
  S(p, p) = std::cos(theta);
  return S;
}

Matrix squeezer_symplectic(int n_modes, int mode, double r) {
  Matrix S = check_mode(n_modes, mode, "squeezer_symplectic");
  S(mode, mode) = std::exp(-r);
  S(n_modes + mode, n_modes + mode) = std::exp(r);
  return S;
}

Matrix beamsplitter_symplectic(int n_modes, int i, int j, double theta) {
  Matrix S = check_mode(n_modes, i, "beamsplitter_symplectic");
  check_mode(n_modes, j, "beamsplitter_symplectic");
  if (i == j) throw std::invalid_argument("beamsplitter_symplectic needs two distinct modes");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (int offset : {0, n_modes}) {
    S(offset + i, offset + i) = c;
    S(offset + i, offset + j) = s;
    S(offset + j, offset + i) = -s;
    S(offset + j, offset + j) = c;
  }
  return S;
}

Matrix two_mode_squeezer_symplectic(int n_modes, int i, int j, double r) {
  Matrix S = check_mode(n_modes, i, "two_mode_squeezer_symplectic");
  check_mode(n_modes, j, "two_mode_squeezer_symplectic");
  if (i == j) throw std::invalid_argument("two_mode_squeezer_symplectic needs two distinct modes");
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  S(i, i) = ch;
  S(j, j) = ch;
  S(i, j) = sh;
  S(j, i) = sh;
  const int pi = n_modes + i;
  const int pj = n_modes + j;
  S(pi, pi) = ch;
  S(pj, pj) = ch;
  S(pi, pj) = -sh;
  S(pj, pi) = -sh;
  return S;
}

Matrix xpxp_to_xxpp_permutation(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("xpxp_to_xxpp_permutation needs n_modes >= 1");
  Matrix P = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    P(k, 2 * k) = 1.0;
    P(n_modes + k, 2 * k + 1) = 1.0;
  }
  return P;
}

}  // namespace gstein
