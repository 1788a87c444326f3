#include "gstein/divergence.hpp"
#include "gstein/errors.hpp"
#include "gstein/fock_oracle.hpp"
#include "gstein/illumination.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gstein;

namespace {

double mean_photons(const FockOperator& rho) {
  const CMatrix a = annihilation(rho.cutoff).matrix;
  return (rho.matrix * a.adjoint() * a).trace().real();
}

}  // namespace

TEST(Ladder, NumberOperator) {
  const CMatrix a = annihilation(8).matrix;
  const CMatrix n = a.adjoint() * a;
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(n(k, k).real(), k, 1e-14);
}

TEST(Ladder, CommutatorOnlyFailsAtTop) {
  const int d = 10;
  const CMatrix a = annihilation(d).matrix;
  const CMatrix c = a * a.adjoint() - a.adjoint() * a - CMatrix::Identity(d, d);
  EXPECT_LE(max_abs(CMatrix(c.topLeftCorner(d - 1, d - 1))), 1e-14);
  EXPECT_NEAR(c(d - 1, d - 1).real(), -static_cast<double>(d), 1e-12);
}

TEST(Ladder, RejectsTinyCutoff) { EXPECT_THROW((void)annihilation(1), std::invalid_argument); }

TEST(ThermalDm, Vacuum) {
  const FockOperator rho = thermal_dm(0.0, 5);
  EXPECT_NEAR(rho.matrix(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-15);
}

TEST(ThermalDm, MeanPhotons) {
  for (double n : {0.1, 0.3, 0.5}) EXPECT_NEAR(mean_photons(thermal_dm(n, 60)), n, 1e-8);
}

TEST(ThermalDm, Covariance) {
  const Moments m = extract_moments(thermal_dm(0.4, 60));
  EXPECT_LE(max_abs(Matrix(m.cov - 0.9 * Matrix::Identity(2, 2))), 1e-7);
}

TEST(ThermalDm, CutoffTooSmall) {
  try {
    (void)thermal_dm(1.0, 5);
    FAIL();
  } catch (const CutoffTooSmallError& e) {
    EXPECT_NEAR(e.trace_deficit(), std::pow(0.5, 5), 1e-15);
  }
}

TEST(ThermalDm, CutoffHelper) {
  const int d = thermal_cutoff_for(0.5, 1e-8);
  EXPECT_NO_THROW((void)thermal_dm(0.5, d));
  EXPECT_THROW((void)thermal_dm(0.5, d - 1), CutoffTooSmallError);
}

TEST(Displacement, CoherentMean) {
  const Complex alpha(0.4, -0.3);
  const CMatrix d = displacement(alpha, 30).matrix;
  const CVector psi = d.col(0);
  const CMatrix q = position_quadrature(30).matrix;
  const CMatrix p = momentum_quadrature(30).matrix;
  EXPECT_NEAR(psi.dot(q * psi).real(), std::sqrt(2.0) * alpha.real(), 1e-8);
  EXPECT_NEAR(psi.dot(p * psi).real(), std::sqrt(2.0) * alpha.imag(), 1e-8);
}

TEST(Displacement, DisplacedThermalMean) {
  const auto pair = coherent_pair({0.5, 0.2, 1.0, 0.01});
  const auto dm = build_scenario_dm(pair, 60);
  const Moments m = extract_moments(dm.sigma);
  EXPECT_NEAR(m.mean(0), 1.0, 1e-7);
  EXPECT_LE(max_abs(Matrix(m.cov - pair.alt_state.cov())), 1e-7);
}

TEST(Beamsplitter, FullTransmissionIsIdentity) {
  const CMatrix u = beamsplitter(1.0, 6).matrix;
  EXPECT_LE(max_abs(CMatrix(u - CMatrix::Identity(36, 36))), 1e-14);
}

TEST(Beamsplitter, UnitaryOnSectors) {
  const CMatrix u = beamsplitter(0.3, 6).matrix;
  // Sectors with total photon number below the cutoff are complete.
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; i + j < 6; ++j) {
      const int col = i * 6 + j;
      EXPECT_NEAR(u.col(col).squaredNorm(), 1.0, 1e-12);
    }
  }
}

TEST(Beamsplitter, HeisenbergAction) {
  // Single photon in the first mode: <n_a> = eta after mixing.
  const double eta = 0.3;
  const CMatrix u = beamsplitter(eta, 4).matrix;
  const CVector out = u.col(1 * 4 + 0);
  const FockOperator a = annihilation(4);
  const CMatrix n0 = embed({4, 1, a.matrix.adjoint() * a.matrix, 0.0}, 0, 2).matrix;
  EXPECT_NEAR(out.dot(n0 * out).real(), eta, 1e-12);
}

TEST(TwoModeSqueezer, SchmidtWeights) {
  const double r = 0.5;
  const int d = 20;
  const CVector psi = two_mode_squeezer(r, d).matrix.col(0);
  const double t = std::tanh(r);
  for (int n = 0; n < 6; ++n) {
    const double expected = std::pow(t, n) / std::cosh(r);
    EXPECT_NEAR(std::abs(psi(n * d + n)), expected, 1e-10);
    EXPECT_GT(psi(n * d + n).real(), 0.0);
  }
  EXPECT_NEAR(std::abs(psi(1 * d + 0)), 0.0, 1e-14);
  const FockOperator rho = tmsv_dm(std::sinh(r) * std::sinh(r), d);
  const FockOperator a = annihilation(d);
  const CMatrix n0 = embed({d, 1, a.matrix.adjoint() * a.matrix, 0.0}, 0, 2).matrix;
  EXPECT_NEAR((rho.matrix * n0).trace().real(), std::sinh(r) * std::sinh(r), 1e-6);
}

TEST(TwoModeSqueezer, MomentsMatchTmsv) {
  const Moments m = extract_moments(tmsv_dm(0.5, 20));
  EXPECT_LE(max_abs(Matrix(m.cov - tmsv(0.5).cov())), 1e-6);
}

TEST(QiAlternative, LosslessLimitIsTmsv) {
  const IlluminationParams p{0.3, 1e-6, 0.999999, 0.01};
  const Moments m = extract_moments(qi_alternative_dm(p, 15));
  EXPECT_LE(max_abs(Matrix(m.cov - tmsv(0.3).cov())), 1e-5);
}

TEST(QiAlternative, CovarianceMatch) {
  const IlluminationParams p{0.2, 0.3, 0.3, 0.01};
  const Moments m = extract_moments(qi_alternative_dm(p, 15));
  EXPECT_LE(max_abs(Matrix(m.cov - qi_pair(p).alt_state.cov())), 1e-4);
}

TEST(QiNull, ProductOfThermals) {
  const IlluminationParams p{0.2, 0.3, 0.3, 0.01};
  const auto dm = build_scenario_dm(qi_pair(p), 15);
  EXPECT_LE(max_abs(Matrix(extract_moments(dm.rho).cov - qi_pair(p).null_state.cov())), 1e-7);
}

TEST(Oracle, IdenticalStates) {
  const FockOperator rho = thermal_dm(0.4, 40);
  const OracleResult r = oracle_divergences(rho, rho);
  EXPECT_NEAR(r.relative_entropy, 0.0, 1e-12);
  EXPECT_NEAR(r.variance, 0.0, 1e-12);
}

TEST(Oracle, ThermalPairIsStable) {
  const auto base = oracle_divergences(thermal_dm(0.5, 80), thermal_dm(1.0, 80));
  const auto doubled = oracle_divergences(thermal_dm(0.5, 160), thermal_dm(1.0, 160));
  EXPECT_NEAR(base.relative_entropy, 0.08495, 1e-5);
  EXPECT_LE(std::abs(base.relative_entropy - doubled.relative_entropy), 1e-7);
  EXPECT_LE(std::abs(base.variance - doubled.variance), 1e-7);
  // Agreement with the covariance-level formulas.
  const auto f = divergences(thermal_state(0.5), thermal_state(1.0));
  EXPECT_NEAR(base.relative_entropy, f.relative_entropy, 1e-6);
  EXPECT_NEAR(base.variance, f.variance, 1e-5);
}

TEST(Oracle, VacuumAgainstThermal) {
  const auto r = oracle_divergences(thermal_dm(0.0, 60), thermal_dm(1.0, 60));
  EXPECT_NEAR(r.relative_entropy, std::log(2.0), 1e-10);
  EXPECT_NEAR(r.variance, 0.0, 1e-10);
  const auto f = divergences(thermal_state(0.0), thermal_state(1.0));
  EXPECT_NEAR(f.relative_entropy, r.relative_entropy, 1e-10);
}

TEST(Oracle, CoherentClosedForm) {
  const IlluminationParams p{0.2, 0.5, 1.0, 0.01};
  const auto dm = build_scenario_dm(coherent_pair(p), 60);
  const auto r = oracle_divergences(dm.rho, dm.sigma);
  const auto cf = coherent_closed_form(p);
  EXPECT_NEAR(r.relative_entropy, cf.relative_entropy, 1e-5);
  EXPECT_NEAR(r.variance, cf.variance, 1e-5);
}

TEST(Oracle, PureTmsvAgainstQiAlternative) {
  const IlluminationParams p{1.0, 0.5, 0.1, 0.01};
  const int d = 30;
  const auto rho = tmsv_dm(1.0, d);
  const auto sigma = qi_alternative_dm(p, d);
  const auto r = oracle_divergences(rho, sigma);
  const auto f = divergences(tmsv(1.0), qi_pair(p).alt_state);
  EXPECT_NEAR(f.relative_entropy, r.relative_entropy, 1e-4);
  EXPECT_NEAR(f.variance, r.variance, 1e-4);
}

TEST(Oracle, RankDeficientSigma) {
  // sigma = |0><0| while rho has weight on |1>.
  const FockOperator sigma = thermal_dm(0.0, 10);
  const FockOperator rho = thermal_dm(0.3, 30);
  FockOperator cropped{10, 1, rho.matrix.topLeftCorner(10, 10), 0.0};
  cropped.matrix /= cropped.matrix.trace();
  EXPECT_THROW((void)oracle_divergences(cropped, sigma), OracleUnreliableError);
}

TEST(Oracle, RejectsNonPositive) {
  FockOperator bad = thermal_dm(0.2, 20);
  bad.matrix(0, 0) = -0.1;
  EXPECT_THROW((void)oracle_divergences(bad, thermal_dm(0.2, 20)), OracleUnreliableError);
}

TEST(Oracle, DimensionMismatch) {
  EXPECT_THROW((void)oracle_divergences(thermal_dm(0.2, 20), thermal_dm(0.2, 24)),
               std::invalid_argument);
}
