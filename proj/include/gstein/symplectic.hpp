#pragma once

// Symplectic linear algebra in xxpp ordering: x = [q_1..q_n, p_1..p_n],
// vacuum variance 1/2.

#include "gstein/linalg.hpp"
#include "gstein/settings.hpp"

namespace gstein {

struct SymplecticForm {
  int n_modes = 0;
  Matrix matrix;  // [[0, I_n], [-I_n, 0]]
};

/// Omega for n modes. Throws std::invalid_argument for n_modes < 1.
[[nodiscard]] SymplecticForm symplectic_form(int n_modes);

/// Shorthand for symplectic_form(n).matrix.
[[nodiscard]] Matrix omega(int n_modes);

/// V = S (D (+) D) S^T with nu sorted ascending.
struct WilliamsonDecomposition {
  Matrix S;
  Vector nu;
  // Residuals measured while building the decomposition.
  double pairing_residual = 0.0;         // max |lambda_k + lambda_{2n-1-k}| / max(1, ||V||)
  double symplectic_residual = 0.0;      // ||S Omega S^T - Omega||_max
  double reconstruction_residual = 0.0;  // ||S (D+D) S^T - V||_max / ||V||_max

  [[nodiscard]] int n_modes() const { return static_cast<int>(nu.size()); }
};

/// Williamson decomposition read off the eigendecomposition of i V Omega.
///
/// The eigenvalues of i V Omega are -nu_j and +nu_j. For the +nu_j eigenvector
/// e_j normalised so that e_j^dagger (i Omega) e_j = 1, the columns of S are
/// S_j = sqrt(2) Re e_j and S_{n+j} = -sqrt(2) Im e_j, i.e. the eigenvector
/// matrix right-multiplied by (U^dagger (x) I_n) with U = [[1,1],[i,-i]]/sqrt(2).
/// The eigenproblem is solved through the Hermitian similarity
/// V^{1/2} (i Omega) V^{1/2}, which keeps degenerate eigenspaces orthonormal.
///
/// Throws std::invalid_argument when V is not square of even size, not
/// symmetric, or not positive definite; NumericalFailure when a residual
/// exceeds its tolerance.
[[nodiscard]] WilliamsonDecomposition williamson(const Matrix& V,
                                                 const NumericsSettings& settings = {});

/// Real matrix K with arcoth(2 i V Omega) = i K.
///
/// Computed independently of williamson(): a general complex eigensolver on
/// 2 i V Omega, arcoth applied to each eigenvalue, then the similarity is
/// undone. The real part left after that is a numerical residual and must stay
/// below imag_tol; it is discarded. Throws PureStateDomainError if some
/// nu <= 1/2 + pure_tol.
[[nodiscard]] Matrix matrix_arcoth_2iVOmega(const Matrix& V, const NumericsSettings& settings = {});

/// G = -2 Omega S [arcoth(2D)]^{(+)2} S^T Omega.
/// Throws PureStateDomainError if some nu <= 1/2 + pure_tol.
[[nodiscard]] Matrix g_matrix(const WilliamsonDecomposition& w,
                              const NumericsSettings& settings = {});
[[nodiscard]] Matrix g_matrix(const Matrix& V, const NumericsSettings& settings = {});

/// G = 2 i Omega arcoth(2 i V Omega) through matrix_arcoth_2iVOmega.
[[nodiscard]] Matrix g_matrix_direct(const Matrix& V, const NumericsSettings& settings = {});

/// Z = det(V + i Omega / 2) evaluated as a determinant. Throws
/// NumericalFailure if the imaginary part is not negligible.
[[nodiscard]] double partition_function(const Matrix& V, const NumericsSettings& settings = {});

/// Z = prod_i (nu_i + 1/2)(nu_i - 1/2).
[[nodiscard]] double partition_function(const WilliamsonDecomposition& w);

/// ln Z as a sum of logarithms; -inf when some nu_i = 1/2.
[[nodiscard]] double log_partition_function(const WilliamsonDecomposition& w);

/// True iff ||S Omega S^T - Omega||_max <= tol. Odd or non-square S throws.
[[nodiscard]] bool is_symplectic(const Matrix& S, double tol);

/// S^{-1} = -Omega S^T Omega for symplectic S.
[[nodiscard]] Matrix symplectic_inverse(const Matrix& S);

/// arcoth(x) = (1/2) ln((x+1)/(x-1)) for |x| > 1.
[[nodiscard]] double arcoth(double x);

// Elementary symplectic matrices on n modes (0-based mode indices).

/// Phase-space rotation of one mode: q -> cos q + sin p, p -> -sin q + cos p.
[[nodiscard]] Matrix rotation_symplectic(int n_modes, int mode, double theta);
/// Single-mode squeezer diag(e^{-r}, e^{r}) on (q_mode, p_mode).
[[nodiscard]] Matrix squeezer_symplectic(int n_modes, int mode, double r);
/// Orthogonal mixing of modes i and j with angle theta (same on q and p).
[[nodiscard]] Matrix beamsplitter_symplectic(int n_modes, int i, int j, double theta);
/// Two-mode squeezer on modes i, j.
[[nodiscard]] Matrix two_mode_squeezer_symplectic(int n_modes, int i, int j, double r);

/// Permutation P with x_xxpp = P x_xpxp.
[[nodiscard]] Matrix xpxp_to_xxpp_permutation(int n_modes);

}  // namespace gstein
