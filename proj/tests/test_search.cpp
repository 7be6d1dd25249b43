#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dynco/search.hpp"
#include "oracle_channels.hpp"

using namespace dynco;

namespace {

const GameConfig kHalf(0.5, oracle::kPhi);
const double kRoot3Half = std::sqrt(3.0) / 2.0;

}  // namespace

TEST(Budget, CountsMustBePositive) {
  SearchBudget b;
  b.random_samples = 0;
  EXPECT_THROW(b.validate(), ValidationError);
  EXPECT_THROW(brute_force_f_lower(hadamard(), kHalf, b), ValidationError);
}

TEST(BruteForce, DiChannelGivesPriorGap) {
  Rng rng(1);
  SearchBudget b;
  b.random_samples = 300;
  b.refinement_iterations = 100;
  const GameConfig cfg(0.7, oracle::kPhi);
  EXPECT_NEAR(brute_force_f_lower(random_di(2, 2, rng), cfg, b), cfg.prior_gap(), 1e-9);
}

TEST(BruteForce, HadamardReachesOptimum) {
  EXPECT_GE(brute_force_f_lower(hadamard(), kHalf, SearchBudget{}), kRoot3Half - 1e-6);
}

TEST(BruteForce, NeverAboveSdpValue) {
  Rng rng(2);
  SearchBudget b;
  b.random_samples = 500;
  for (int n = 0; n < 5; ++n) {
    const Channel th = random_channel(2, 2, rng);
    const double exact = evaluate_f(th, kHalf).f_value;
    const double lower = brute_force_f_lower(th, kHalf, b);
    EXPECT_LE(lower, exact + 1e-6);
    EXPECT_GE(lower, exact - 5e-3);
  }
}

TEST(BruteForce, NonSquareShapes) {
  const Channel th = oracle::qutrit_to_qubit();
  const GameConfig cfg(0.6, oracle::kPhi);
  SearchBudget b;
  b.random_samples = 10000;
  const double exact = evaluate_f(th, cfg).f_value;
  const double lower = brute_force_f_lower(th, cfg, b);
  EXPECT_LE(lower, exact + 1e-6);
  EXPECT_GE(lower, exact - 5e-3);
}

TEST(BruteForce, ThreadCountDoesNotChangeResult) {
  Rng rng(3);
  const Channel th = random_channel(2, 2, rng);
  SearchBudget b;
  b.random_samples = 200;
  EXPECT_EQ(brute_force_f_lower(th, kHalf, b, 1), brute_force_f_lower(th, kHalf, b, 3));
}

TEST(LFunctional, DiChannelIsZero) {
  Rng rng(4);
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(l_functional(random_di(2, 2, rng), kHalf, SearchBudget{}), 0.0, 1e-9);
}

TEST(LFunctional, NeverAbovePreProcessedValue) {
  Rng rng(5);
  for (int n = 0; n < 5; ++n) {
    const Channel th = random_channel(2, 2, rng);
    EXPECT_LE(l_functional(th, kHalf, SearchBudget{}), evaluate_f(th, kHalf).value + 1e-6);
  }
}

TEST(LFunctional, HadamardWithoutPreProcessing) {
  // Phi = id is already optimal for the Hadamard channel.
  EXPECT_NEAR(l_functional(hadamard(), kHalf, SearchBudget{}), kRoot3Half, 1e-6);
}

TEST(LFunctional, DimensionMismatch) {
  EXPECT_THROW(l_functional(qft(3), kHalf, SearchBudget{}), DimensionError);
}

TEST(Counterexample, SwapActivatesDetection) {
  const auto r = swap_counterexample();
  EXPECT_LE(r.l_before, 1e-6);
  EXPECT_NEAR(r.l_after, 1.0, 1e-3);
}

TEST(Counterexample, SwapIsFree) {
  EXPECT_TRUE(is_detection_incoherent(swap(2, 2)));
  EXPECT_TRUE(is_mio(swap(2, 2)));
}

TEST(Counterexample, PreProcessedValueUnchangedBySwap) {
  const GameConfig cfg = counterexample_config();
  const Channel th = counterexample_channel();
  EXPECT_LE(evaluate_f(compose(th, swap(2, 2)), cfg).f_value, evaluate_f(th, cfg).f_value + 1e-5);
}

TEST(PostProcessed, MioChannelIsZero) {
  Rng rng(6);
  for (int n = 0; n < 5; ++n) EXPECT_LE(post_processed_lower(random_mio(2, 2, rng), kHalf), 1e-6);
}

TEST(PostProcessed, HadamardMatchesAnalyticBound) {
  const auto r = post_processed_search(hadamard(), kHalf, SearchBudget{});
  EXPECT_TRUE(r.lower_bound);
  EXPECT_GE(r.value, kRoot3Half - 1e-4);
  EXPECT_LE(r.value, kRoot3Half + 1e-6);
  ASSERT_TRUE(r.best_psi.has_value());
  EXPECT_TRUE(is_mio(*r.best_psi, 1e-7));
}

TEST(PostProcessed, EmbeddedHadamardOnQutrit) {
  ComplexMatrix u = ComplexMatrix::Zero(3, 3);
  u.topLeftCorner(2, 2) = hadamard_matrix();
  u(2, 2) = 1.0;
  const GameConfig cfg(0.5, {oracle::kPhi[0], 0.0, 0.0});
  EXPECT_GE(post_processed_lower(unitary_channel(u), cfg), kRoot3Half - 1e-4);
}

TEST(PostProcessed, RunsAreMonotone) {
  Rng rng(7);
  for (int n = 0; n < 3; ++n) {
    const auto r = post_processed_search(random_channel(2, 2, rng), GameConfig(0.6, oracle::kPhi), SearchBudget{});
    EXPECT_EQ(r.trajectories.size(), 2U * (1 + kPostProcessedRestarts));
    for (const auto& t : r.trajectories) {
      for (std::size_t k = 1; k < t.size(); ++k) EXPECT_GE(t[k], t[k - 1]);
    }
  }
}

TEST(PostProcessed, NonSquareOutput) {
  const GameConfig cfg(0.5, {0.0, 1.0, 2.0});
  const auto r = post_processed_search(oracle::qutrit_to_qubit(), cfg, SearchBudget{});
  EXPECT_GE(r.value, -1e-9);
  EXPECT_EQ(r.best_psi->dim_in(), 2);
  EXPECT_EQ(r.best_psi->dim_out(), 3);
}

TEST(Game, PriorBettingOnDiChannel) {
  Rng rng(8);
  const GameConfig cfg(0.8, oracle::kPhi);
  const IncoherentPovm always_not_applied({ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(2, 2)});
  const auto g = monte_carlo_game(random_di(2, 2, rng), identity_channel(2), DensityMatrix::maximally_mixed(2),
                                  always_not_applied, cfg, 100000, 3);
  EXPECT_NEAR(g.predicted_rate, 0.8, 1e-12);
  EXPECT_NEAR(g.empirical_rate, 0.8, 4.0 * std::sqrt(0.16 / 1e5));
  EXPECT_EQ(g.empirical_rate, static_cast<double>(g.successes) / static_cast<double>(g.trials));
}

TEST(Game, HadamardOptimalPipeline) {
  const auto rep = evaluate_f(hadamard(), kHalf);
  const auto pipe = optimal_pipeline(hadamard(), kHalf, rep.extraction);
  const auto g = monte_carlo_game(hadamard(), pipe.phi_pre, pipe.rho, pipe.povm, kHalf, 100000, 11);
  EXPECT_NEAR(g.predicted_rate, 0.5 + std::sqrt(3.0) / 4.0, 1e-6);
  EXPECT_LE(std::abs(g.z_score), 3.0);
}

TEST(Game, CertainWhenPhaseNeverApplied) {
  const GameConfig cfg(1.0, oracle::kPhi);
  const auto rep = evaluate_f(hadamard(), cfg);
  const auto pipe = optimal_pipeline(hadamard(), cfg, rep.extraction);
  const auto g = monte_carlo_game(hadamard(), pipe.phi_pre, pipe.rho, pipe.povm, cfg, 5000, 1);
  EXPECT_EQ(g.successes, g.trials);
  EXPECT_EQ(g.z_score, 0.0);
}

TEST(Game, ReproducibleAcrossThreadCounts) {
  const auto rep = evaluate_f(hadamard(), kHalf);
  const auto pipe = optimal_pipeline(hadamard(), kHalf, rep.extraction);
  const auto a = monte_carlo_game(hadamard(), pipe.phi_pre, pipe.rho, pipe.povm, kHalf, 50000, 5, 1);
  const auto b = monte_carlo_game(hadamard(), pipe.phi_pre, pipe.rho, pipe.povm, kHalf, 50000, 5, 4);
  EXPECT_EQ(a.successes, b.successes);
}

TEST(Game, RejectsBadInputs) {
  const IncoherentPovm three({basis_projector(3, 0), basis_projector(3, 1), basis_projector(3, 2)});
  EXPECT_THROW(monte_carlo_game(qft(3), identity_channel(3), DensityMatrix::maximally_mixed(3), three,
                                GameConfig(0.5, {0.0, 1.0, 2.0}), 10, 1),
               ValidationError);
  const IncoherentPovm two({basis_projector(2, 0), basis_projector(2, 1)});
  EXPECT_THROW(monte_carlo_game(hadamard(), identity_channel(2), DensityMatrix::maximally_mixed(2), two, kHalf, 0, 1),
               ValidationError);
}

TEST(Sweep, GridAndEndpoints) {
  const auto rows = faithfulness_sweep({0.5, 0.9}, unit_grid(11), oracle::kPhi);
  ASSERT_EQ(rows.size(), 22U);
  EXPECT_NEAR(rows[0].m, 0.0, 1e-9);
  for (std::size_t k = 1; k < 11; ++k) EXPECT_GT(rows[k].m, 1e-6);
  EXPECT_LE(rows[11 + 2].m, 1e-7);   // lambda 0.9, p1 0.2
  EXPECT_GT(rows[11 + 10].m, 1e-3);  // lambda 0.9, p1 1
  EXPECT_THROW(faithfulness_sweep({0.5}, {1.5}, oracle::kPhi), ValidationError);
  EXPECT_THROW(unit_grid(1), ValidationError);
}
