#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dynco/measures.hpp"

using namespace dynco;

namespace {

const double kPhase = 2.0 * std::numbers::pi / 3.0;

DensityMatrix plus_state() {
  ComplexVector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure(v);
}

DensityMatrix diag_state(double p) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = p;
  m(1, 1) = 1.0 - p;
  return DensityMatrix(m);
}

}  // namespace

TEST(GameConfig, Validation) {
  EXPECT_THROW(GameConfig(1.5, {0.0, 1.0}), ValidationError);
  EXPECT_THROW(GameConfig(0.5, {}), ValidationError);
  EXPECT_THROW(GameConfig(0.5, {0.0, std::nan("")}), ValidationError);
  const GameConfig cfg(0.7, {0.0, 1.0});
  EXPECT_NEAR(cfg.lambda + cfg.mu(), 1.0, 1e-15);
  EXPECT_TRUE(cfg.nontrivial_phases());
  EXPECT_FALSE(GameConfig(0.7, {1.0, 1.0}).nontrivial_phases());
}

TEST(IncoherentPovm, Validation) {
  EXPECT_THROW(IncoherentPovm({pauli::x(), ComplexMatrix::Identity(2, 2) - pauli::x()}), ValidationError);
  EXPECT_THROW(IncoherentPovm({basis_projector(2, 0)}), ValidationError);
  EXPECT_NO_THROW(IncoherentPovm({basis_projector(2, 0), basis_projector(2, 1)}));
}

TEST(SignalMap, LambdaOneIsIdentity) {
  const GameConfig cfg(1.0, {kPhase, 0.0});
  EXPECT_LT(max_abs(signal_map(cfg).choi() - identity_channel(2).choi()), 1e-14);
}

TEST(SignalMap, IncoherentInputScaled) {
  const GameConfig cfg(0.8, {kPhase, 0.0, 1.0});
  ComplexMatrix s = ComplexMatrix::Zero(3, 3);
  s(0, 0) = 0.2;
  s(1, 1) = 0.3;
  s(2, 2) = 0.5;
  EXPECT_LT(max_abs(apply_map(signal_map(cfg), s) - (cfg.lambda - cfg.mu()) * s), 1e-14);
}

TEST(SignalMap, PlusStateTraceNorm) {
  const GameConfig cfg(0.5, {kPhase, 0.0});
  const ComplexMatrix out = apply_map(signal_map(cfg), plus_state().matrix());
  EXPECT_NEAR(trace_norm_hermitian(HermitianView(out)), std::sqrt(3.0) / 2.0, 1e-12);
}

TEST(FDirect, DiChannelsGivePriorGap) {
  Rng rng(1);
  const GameConfig cfg(0.65, {kPhase, 0.0});
  for (int n = 0; n < 200; ++n) {
    const Channel theta = random_di(2, 2, rng);
    const Channel pre = random_di(2, 2, rng);
    EXPECT_NEAR(f_direct(theta, pre, random_pure_state(2, rng), cfg), cfg.prior_gap(), 1e-8);
  }
}

TEST(FDirect, HadamardOptimum) {
  const GameConfig cfg(0.5, {kPhase, 0.0});
  // Align the coherence of (lambda - mu Lambda) rho with the real axis.
  const double xi = -(std::numbers::pi - kPhase) / 2.0;
  ComplexVector v(2);
  v << 1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), xi);
  EXPECT_NEAR(f_direct(hadamard(), identity_channel(2), DensityMatrix::pure(v), cfg), std::sqrt(3.0) / 2.0, 1e-12);
}

TEST(FDirect, LambdaOneGivesOne) {
  Rng rng(2);
  const GameConfig cfg(1.0, {kPhase, 0.0});
  for (int n = 0; n < 20; ++n) {
    EXPECT_NEAR(f_direct(random_channel(2, 3, rng), random_channel(2, 2, rng), random_mixed_state(2, rng), cfg), 1.0, 1e-12);
  }
}

TEST(FDirect, NeverBelowPriorGap) {
  Rng rng(3);
  const GameConfig cfg(0.3, {kPhase, 0.0});
  for (int n = 0; n < 200; ++n) {
    EXPECT_GE(f_direct(random_channel(2, 2, rng), random_channel(2, 2, rng), random_mixed_state(2, rng), cfg),
              cfg.prior_gap() - 1e-9);
  }
}

TEST(FDirect, DimensionMismatch) {
  const GameConfig cfg(0.5, {kPhase, 0.0});
  EXPECT_THROW(f_direct(hadamard(), identity_channel(3), DensityMatrix::maximally_mixed(2), cfg), DimensionError);
}

TEST(Helstrom, Cases) {
  const GameConfig cfg(0.5, {kPhase, 0.0});
  EXPECT_NEAR(helstrom_norm(cfg, plus_state(), plus_state()), 0.0, 1e-14);
  EXPECT_NEAR(helstrom_norm(cfg, DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)), 1.0, 1e-14);
  const DensityMatrix rotated(apply_map(phase_channel(cfg.phi), plus_state().matrix()));
  EXPECT_NEAR(helstrom_norm(cfg, plus_state(), rotated), std::sqrt(3.0) / 2.0, 1e-12);
  EXPECT_THROW(helstrom_norm(cfg, plus_state(), DensityMatrix::maximally_mixed(3)), DimensionError);
}

TEST(Bias, MeasurementBiasAtLeastTrivial) {
  Rng rng(4);
  for (double lambda : {0.2, 0.5, 0.9}) {
    const GameConfig cfg(lambda, {kPhase, 0.0});
    for (int n = 0; n < 50; ++n) {
      const auto s0 = random_mixed_state(2, rng);
      const auto s1 = random_mixed_state(2, rng);
      EXPECT_GE(measurement_bias(cfg, s0, s1), trivial_bias(cfg) - 1e-12);
      EXPECT_LE(measurement_bias(cfg, s0, s1), helstrom_norm(cfg, s0, s1) / 2.0 + 1e-12);
    }
  }
}

TEST(Bias, EqualDiagonalsGiveZero) {
  const GameConfig cfg(0.5, {kPhase, 0.0});
  const DensityMatrix rotated(apply_map(phase_channel(cfg.phi), plus_state().matrix()));
  EXPECT_NEAR(measurement_bias(cfg, plus_state(), rotated), 0.0, 1e-14);
}

TEST(Bias, QubitClosedForm) {
  Rng rng(5);
  for (double lambda : {0.1, 0.5, 0.75}) {
    const GameConfig cfg(lambda, {kPhase, 0.0});
    for (int n = 0; n < 50; ++n) {
      const auto s0 = random_mixed_state(2, rng);
      const auto s1 = random_mixed_state(2, rng);
      const double z = (pauli::z() * weighted_difference(cfg, s0, s1)).trace().real();
      EXPECT_NEAR(measurement_bias(cfg, s0, s1), 0.5 * std::max(cfg.prior_gap(), std::abs(z)), 1e-12);
    }
  }
}

TEST(OptimalPovm, AllPositiveMeansNoMeasurement) {
  const GameConfig cfg(0.9, {kPhase, 0.0});
  const auto povm = optimal_incoherent_povm(cfg, diag_state(0.5), diag_state(0.6));
  EXPECT_LT(max_abs(povm.elements()[0] - ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(OptimalPovm, AllNegativeMeansAlwaysApplied) {
  const GameConfig cfg(0.1, {kPhase, 0.0});
  const auto povm = optimal_incoherent_povm(cfg, diag_state(0.5), diag_state(0.6));
  EXPECT_LT(max_abs(povm.elements()[0]), 1e-15);
}

TEST(OptimalPovm, MixedSignPicksBasisProjector) {
  const GameConfig cfg(0.5, {kPhase, 0.0});
  const auto povm = optimal_incoherent_povm(cfg, diag_state(0.9), diag_state(0.1));
  EXPECT_LT(max_abs(povm.elements()[0] - basis_projector(2, 0)), 1e-15);
}

TEST(OptimalPovm, AchievesMeasurementBias) {
  Rng rng(6);
  for (Eigen::Index d : {2, 3}) {
    for (double lambda : {0.3, 0.5, 0.8}) {
      const GameConfig cfg(lambda, std::vector<double>(static_cast<std::size_t>(d), 0.0));
      for (int n = 0; n < 30; ++n) {
        const auto s0 = random_mixed_state(d, rng);
        const auto s1 = random_mixed_state(d, rng);
        const auto povm = optimal_incoherent_povm(cfg, s0, s1);
        EXPECT_NEAR(decision_success(cfg, povm, s0, s1), 0.5 + measurement_bias(cfg, s0, s1), 1e-10);
      }
    }
  }
}

TEST(SuccessProbability, Cases) {
  EXPECT_NEAR(success_probability(0.0, GameConfig(0.5, {kPhase, 0.0})), 0.5, 1e-15);
  EXPECT_NEAR(success_probability(0.0, GameConfig(0.9, {kPhase, 0.0})), 0.9, 1e-15);
  EXPECT_NEAR(success_probability(std::sqrt(3.0) / 2.0, GameConfig(0.5, {kPhase, 0.0})), 0.5 + std::sqrt(3.0) / 4.0, 1e-15);
  EXPECT_THROW(success_probability(0.5, GameConfig(0.9, {kPhase, 0.0})), ValidationError);
}
