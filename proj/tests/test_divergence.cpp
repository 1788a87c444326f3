#include "gstein/divergence.hpp"
#include "gstein/errors.hpp"
#include "gstein/illumination.hpp"
#include "gstein/states.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

using namespace gstein;
using gen::relative_error;

namespace {

// High-precision series sums over the thermal distributions.
constexpr double kThermalPairD = 0.084949518397698736;
constexpr double kThermalPairV = 0.12330146541987407;

GaussianState zero_mean(const GaussianState& s) {
  return GaussianState(Vector::Zero(s.mean().size()), s.cov());
}

}  // namespace

TEST(ThermalEntropy, Values) {
  EXPECT_EQ(thermal_entropy(0.0), 0.0);
  EXPECT_NEAR(thermal_entropy(1.0), 2.0 * std::log(2.0), 1e-15);
}

TEST(RelativeEntropy, IdenticalStatesVanish) {
  const GaussianState s = thermal_state(1.0);
  const auto r = divergences(s, s);
  EXPECT_NEAR(r.relative_entropy, 0.0, 1e-14);
  EXPECT_NEAR(r.variance, 0.0, 1e-14);
  EXPECT_EQ(r.formula_route, FormulaRoute::general);
}

TEST(RelativeEntropy, ThermalPair) {
  const auto r = divergences(thermal_state(0.5), thermal_state(1.0));
  EXPECT_NEAR(r.relative_entropy, kThermalPairD, 1e-12);
  EXPECT_NEAR(r.variance, kThermalPairV, 1e-12);
}

TEST(RelativeEntropy, CoherentUnitParameters) {
  const auto pair = coherent_pair({1.0, 1.0, 1.0, 0.01});
  const auto r = divergences(pair.null_state, pair.alt_state);
  EXPECT_NEAR(r.relative_entropy, std::log(2.0), 1e-12);
  EXPECT_NEAR(r.variance, 3.0 * std::log(2.0) * std::log(2.0), 1e-12);
  ASSERT_TRUE(r.gamma_norm.has_value());
  EXPECT_NEAR(*r.gamma_norm, 0.0, 1e-14);
}

TEST(RelativeEntropy, VacuumAgainstThermal) {
  // rho = |0><0| and sigma has p_0 = 1/2, so D = ln 2 and ln(rho/sigma) is constant on supp rho.
  const auto r = divergences(thermal_state(0.0), thermal_state(1.0));
  EXPECT_EQ(r.entropy_route, FormulaRoute::g_form);
  EXPECT_EQ(r.formula_route, FormulaRoute::alternate);
  EXPECT_NEAR(r.relative_entropy, std::log(2.0), 1e-12);
  EXPECT_NEAR(r.variance, 0.0, 1e-12);
  EXPECT_FALSE(r.g_rho.has_value());
}

TEST(RelativeEntropy, PartitionFormRejectsPureRho) {
  EXPECT_THROW((void)relative_entropy_partition_form(thermal_state(0.0), thermal_state(1.0)),
               PureStateDomainError);
}

TEST(RelativeEntropy, SigmaWithoutFullSupport) {
  try {
    (void)divergences(thermal_state(1.0), thermal_state(0.0));
    FAIL();
  } catch (const NotFullSupportError& e) {
    EXPECT_NEAR(e.symplectic_eigenvalue(), 0.5, 1e-12);
    EXPECT_NE(std::string(e.what()).find("nu_1"), std::string::npos) << e.what();
  }
}

TEST(RelativeEntropy, ModeMismatch) {
  EXPECT_THROW((void)divergences(thermal_state(1.0), tmsv(1.0)), std::invalid_argument);
}

TEST(RelativeEntropy, InvalidState) {
  const GaussianState bad(Vector::Zero(2), 0.4 * Matrix::Identity(2, 2));
  EXPECT_THROW((void)divergences(bad, thermal_state(1.0)), std::invalid_argument);
}

TEST(RelativeEntropy, RoutesAgreeOnRandomPairs) {
  gen::Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const GaussianState rho = gen::random_state(n, rng);
    const GaussianState sigma = gen::random_state(n, rng);
    const double a = relative_entropy_partition_form(rho, sigma);
    const double b = relative_entropy_g_form(rho, sigma);
    EXPECT_LE(std::abs(a - b), 1e-9 * std::max(1.0, std::abs(a))) << trial;
    EXPECT_GE(a, -1e-12);
  }
}

TEST(Variance, AlternateMatchesGeneral) {
  gen::Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const GaussianState rho = zero_mean(gen::random_state(2, rng));
    const GaussianState sigma = zero_mean(gen::random_state(2, rng));
    const double general = relative_entropy_variance_general(rho, sigma);
    const double alternate = relative_entropy_variance_alternate(rho, sigma);
    EXPECT_LE(relative_error(alternate, general), 1e-8) << trial;
  }
}

TEST(Variance, AlternateNeedsZeroMeans) {
  EXPECT_THROW((void)relative_entropy_variance_alternate(displaced_thermal(0.1, 0.0, 1.0),
                                                         thermal_state(1.0)),
               std::invalid_argument);
}

TEST(Variance, PureRhoWithMeanIsOutsideDomain) {
  EXPECT_THROW((void)divergences(displaced_thermal(0.3, 0.0, 0.0), thermal_state(1.0)),
               PureStateDomainError);
}

TEST(Variance, PureTmsvAgainstQiAlternative) {
  const auto alt = qi_pair({1.0, 0.5, 0.1, 0.01}).alt_state;
  const auto r = divergences(tmsv(1.0), alt);
  EXPECT_EQ(r.formula_route, FormulaRoute::alternate);
  EXPECT_TRUE(std::isfinite(r.relative_entropy));
  EXPECT_TRUE(std::isfinite(r.variance));
  EXPECT_GT(r.variance, 0.0);
}

TEST(StandardFormRoute, IdenticalParams) {
  const StandardFormParams p{1.2, 0.9, 0.3};
  const auto r = standard_form_divergences(p, p);
  EXPECT_NEAR(r.relative_entropy, 0.0, 1e-13);
  EXPECT_NEAR(r.variance, 0.0, 1e-13);
}

TEST(StandardFormRoute, QiPairMatchesGeneral) {
  for (const IlluminationParams p : {IlluminationParams{0.2, 0.3, 0.3, 0.01},
                                     IlluminationParams{10.0, 0.05, 0.1, 0.01},
                                     IlluminationParams{0.01, 20.0, 0.01, 0.01}}) {
    const double mu = p.n_s + 0.5;
    const StandardFormParams null{p.n_b + 0.5, mu, 0.0};
    const StandardFormParams alt{p.eta * p.n_s + p.n_b + 0.5, mu,
                                 std::sqrt(p.eta) * std::sqrt(p.n_s * (p.n_s + 1.0))};
    const auto sf = standard_form_divergences(null, alt);
    const auto pair = qi_pair(p);
    const auto gen = divergences(pair.null_state, pair.alt_state);
    EXPECT_LE(relative_error(sf.relative_entropy, gen.relative_entropy), 1e-9);
    EXPECT_LE(relative_error(sf.variance, gen.variance), 1e-9);
  }
}

TEST(StandardFormRoute, SymplecticHasUnitDeterminant) {
  gen::Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = standard_form_symplectic(gen::random_standard_form(rng));
    EXPECT_NEAR(s.omega_plus * s.omega_plus - s.omega_minus * s.omega_minus, 1.0, 1e-12);
  }
}

TEST(StandardFormRoute, EigenvaluesMatchWilliamson) {
  // nu_+- = [sqrt y +- (b - a)] / 2 follows the modes, so with b < a nu_- is the larger.
  const auto s = standard_form_symplectic({2.0, 1.0, 0.5});
  EXPECT_NEAR(s.nu_minus, (std::sqrt(8.0) + 1.0) / 2.0, 1e-15);
  EXPECT_NEAR(s.nu_plus, (std::sqrt(8.0) - 1.0) / 2.0, 1e-15);
  const auto w = williamson(from_standard_form({2.0, 1.0, 0.5}).cov());
  EXPECT_NEAR(w.nu(0), s.nu_plus, 1e-12);
  EXPECT_NEAR(w.nu(1), s.nu_minus, 1e-12);
}

TEST(StandardFormRoute, RejectsPureSigma) {
  const double mu = 1.5;
  EXPECT_THROW((void)standard_form_divergences({1.0, 1.0, 0.0}, {mu, mu, std::sqrt(mu * mu - 0.25)}),
               NotFullSupportError);
}
