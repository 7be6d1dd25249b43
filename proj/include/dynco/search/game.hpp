#ifndef DYNCO_SEARCH_GAME_HPP
#define DYNCO_SEARCH_GAME_HPP

// Monte-Carlo play of the phase-guessing game: Bob sends rho through his
// pre-processing to Alice, who applies Lambda_phi with probability mu, then
// Theta; Bob measures and answers "not applied" on outcome 0.

#include <cmath>
#include <thread>

#include "dynco/search/common.hpp"

namespace dynco {

struct GameTranscript {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double empirical_rate = 0.0;
  double predicted_rate = 0.0;
  double z_score = 0.0;
};

inline constexpr std::size_t kGameChunk = 8192;

/// Bob's strategy: pre-processing, probe state and measurement.
struct GamePipeline {
  Channel phi_pre;
  DensityMatrix rho;
  IncoherentPovm povm;
};

/// The extracted optimal pair with the optimal incoherent measurement for it.
inline GamePipeline optimal_pipeline(const Channel& theta, const GameConfig& cfg, const ExtractionResult& ex) {
  if (!ex.phi_opt || !ex.rho_opt) throw ValidationError("optimal_pipeline: empty extraction result");
  const ComplexMatrix& rho = ex.rho_opt->matrix();
  const DensityMatrix s0(apply_map(theta, apply_map(*ex.phi_opt, rho)), 1e-7);
  const DensityMatrix s1(apply_map(theta, apply_map(*ex.phi_opt, apply_map(phase_channel(cfg.phi), rho))), 1e-7);
  return {*ex.phi_opt, *ex.rho_opt, optimal_incoherent_povm(cfg, s0, s1)};
}

inline GameTranscript monte_carlo_game(const Channel& theta, const Channel& phi_pre, const DensityMatrix& rho,
                                       const IncoherentPovm& povm, const GameConfig& cfg, std::size_t trials,
                                       std::uint64_t rng_seed, unsigned threads = 1) {
  cfg.validate();
  if (trials < 1) throw ValidationError("monte_carlo_game: trials must be >= 1");
  if (povm.elements().size() != 2) throw ValidationError("monte_carlo_game: POVM must have two outcomes");
  if (rho.dim() != cfg.dim() || phi_pre.dim_in() != cfg.dim()) {
    throw DimensionError("monte_carlo_game: state or pre-processing does not match the phase vector");
  }
  if (phi_pre.dim_out() != theta.dim_in()) throw DimensionError("monte_carlo_game: pre-processing output differs from theta input");
  if (povm.dim() != theta.dim_out()) throw DimensionError("monte_carlo_game: POVM dimension differs from theta output");

  const DensityMatrix sigma0(apply_map(theta, apply_map(phi_pre, rho.matrix())), 1e-7);
  const DensityMatrix lam_rho(apply_map(phase_channel(cfg.phi), rho.matrix()), 1e-7);
  const DensityMatrix sigma1(apply_map(theta, apply_map(phi_pre, lam_rho.matrix())), 1e-7);
  const double q0 = std::clamp(povm.probabilities(sigma0.matrix())[0], 0.0, 1.0);  // correct when not applied
  const double q1 = std::clamp(povm.probabilities(sigma1.matrix())[1], 0.0, 1.0);  // correct when applied
  const double mu = cfg.mu();

  const std::size_t chunks = (trials + kGameChunk - 1) / kGameChunk;
  std::vector<std::size_t> wins(chunks, 0);
  auto play = [&](std::size_t c) {
    Rng rng(stream_seed(rng_seed, c));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = std::min(kGameChunk, trials - c * kGameChunk);
    std::size_t w = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const bool applied = unit(rng) < mu;
      const double u = unit(rng);
      w += applied ? (u < q1) : (u < q0);
    }
    wins[c] = w;
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) play(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers) play(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  GameTranscript g;
  g.trials = trials;
  for (std::size_t w : wins) g.successes += w;
  g.empirical_rate = static_cast<double>(g.successes) / static_cast<double>(trials);
  g.predicted_rate = cfg.lambda * q0 + mu * q1;
  const double diff = g.empirical_rate - g.predicted_rate;
  const double sd = std::sqrt(g.predicted_rate * (1.0 - g.predicted_rate) / static_cast<double>(trials));
  g.z_score = std::abs(diff) <= 1e-12 ? 0.0 : diff / std::max(sd, 1e-12);
  return g;
}

}  // namespace dynco

#endif  // DYNCO_SEARCH_GAME_HPP
