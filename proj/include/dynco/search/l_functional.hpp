#ifndef DYNCO_SEARCH_L_FUNCTIONAL_HPP
#define DYNCO_SEARCH_L_FUNCTIONAL_HPP

// The no-pre-processing functional
//     L(Theta) = max_{rho pure} || Delta Theta (lambda - mu Lambda_phi)(rho) ||_1 - |lambda - mu|,
// and the subsystem-swap instance showing it is not monotone under free
// superchannels.

#include <cmath>
#include <numbers>
#include <utility>

#include "dynco/search/common.hpp"

namespace dynco {

inline double l_functional(const Channel& theta, const GameConfig& cfg, const SearchBudget& budget) {
  using namespace search_detail;
  cfg.validate();
  budget.validate();
  const Eigen::Index d = cfg.dim();
  if (theta.dim_in() != d) throw DimensionError("l_functional: channel input differs from phase vector");
  const ComplexMatrix weights = signal_weights(cfg);
  auto value = [&](std::span<const double> p) {
    const ComplexVector v = unit_vector(p);
    return diagonal_l1(apply_map(theta, ComplexMatrix(weights.cwiseProduct(v * v.adjoint()))));
  };

  std::vector<std::pair<double, std::vector<double>>> seeds;
  auto consider = [&](const ComplexVector& v) {
    auto p = vector_params(v);
    seeds.emplace_back(value(p), std::move(p));
  };

  if (d == 1) return std::abs(value(std::vector<double>{1.0, 0.0})) - cfg.prior_gap();

  if (d == 2) {
    const std::size_t res = budget.grid_resolution;
    for (std::size_t a = 0; a <= res; ++a) {
      const double polar = std::numbers::pi * static_cast<double>(a) / static_cast<double>(res);
      for (std::size_t b = 0; b < 2 * res; ++b) {
        const double azimuth = std::numbers::pi * static_cast<double>(b) / static_cast<double>(res);
        ComplexVector v(2);
        v << std::cos(polar / 2), std::polar(std::sin(polar / 2), azimuth);
        consider(v);
      }
    }
  } else {
    // Equal-weight superpositions of basis pairs, then Haar draws.
    constexpr int kPhases = 8;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i + 1; j < d; ++j) {
        for (int t = 0; t < kPhases; ++t) {
          ComplexVector v = ComplexVector::Zero(d);
          v(i) = 1.0 / std::sqrt(2.0);
          v(j) = std::polar(1.0 / std::sqrt(2.0), 2.0 * std::numbers::pi * t / kPhases);
          consider(v);
        }
      }
    }
    Rng rng(budget.rng_seed);
    for (std::size_t s = 0; s < budget.random_samples; ++s) consider(random_pure_vector(d, rng));
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    ComplexVector v = ComplexVector::Zero(d);
    v(i) = 1.0;
    consider(v);
  }

  const std::size_t top = std::min<std::size_t>(4, seeds.size());
  std::partial_sort(seeds.begin(), seeds.begin() + static_cast<std::ptrdiff_t>(top), seeds.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = seeds.front().first;
  for (std::size_t r = 0; r < top; ++r) {
    Rng local(stream_seed(budget.rng_seed, 1000 + r));
    best = std::max(best, local_ascent(seeds[r].second, value, budget.refinement_iterations, local, 0.05));
  }
  return best - cfg.prior_gap();
}

struct CounterexampleResult {
  double l_before = 0.0;
  double l_after = 0.0;
};

/// Theta = H (x) id on qubit (x) qubit, Lambda = id (x) Lambda_(pi, 0), lambda = 1/2,
/// before and after precomposing with the subsystem swap.
inline GameConfig counterexample_config() { return GameConfig(0.5, {std::numbers::pi, 0.0, std::numbers::pi, 0.0}); }

inline Channel counterexample_channel() { return tensor(hadamard(), identity_channel(2)); }

inline CounterexampleResult swap_counterexample(const SearchBudget& budget = {}) {
  const GameConfig cfg = counterexample_config();
  const Channel theta = counterexample_channel();
  const Channel swapped = compose(theta, swap(2, 2));
  CounterexampleResult r{l_functional(theta, cfg, budget), l_functional(swapped, cfg, budget)};
  if (!(r.l_before <= 1e-6 && r.l_after > 1e-6)) {
    throw SolverError("swap_counterexample: expected L = 0 before and L > 0 after the swap, got " +
                      std::to_string(r.l_before) + " and " + std::to_string(r.l_after));
  }
  return r;
}

}  // namespace dynco

#endif  // DYNCO_SEARCH_L_FUNCTIONAL_HPP
