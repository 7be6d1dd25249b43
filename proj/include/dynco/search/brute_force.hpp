#ifndef DYNCO_SEARCH_BRUTE_FORCE_HPP
#define DYNCO_SEARCH_BRUTE_FORCE_HPP

// Lower bounds on max_{Phi in DI, rho} || Delta Theta Phi (lambda - mu Lambda_phi)(rho) ||_1
// by direct sampling, without the SDP reduction. Every evaluated point is an
// explicit (DI channel, pure state) pair, so the result never exceeds the
// true maximum.

#include <algorithm>
#include <numeric>
#include <thread>
#include <vector>

#include "dynco/search/common.hpp"

namespace dynco {

namespace search_detail {

/// Pure-state optimization of || Delta Theta Phi (c o rho) ||_1 for a fixed Phi (given by Kraus operators).
inline double best_state_for(const Channel& theta, std::span<const ComplexMatrix> phi_kraus, const ComplexMatrix& weights,
                             const SearchBudget& budget, Rng& rng) {
  const Eigen::Index d = weights.rows();
  auto value = [&](std::span<const double> p) {
    const ComplexVector v = unit_vector(p);
    const ComplexMatrix signal = weights.cwiseProduct(v * v.adjoint());
    return diagonal_l1(apply_map(theta, apply_kraus(phi_kraus, signal)));
  };
  std::vector<double> best_params;
  double best = -1.0;
  const std::size_t draws = std::max<std::size_t>(16, budget.random_samples / 50);
  for (std::size_t s = 0; s < draws; ++s) {
    auto p = vector_params(random_pure_vector(d, rng));
    const double v = value(p);
    if (v > best) {
      best = v;
      best_params = std::move(p);
    }
  }
  return local_ascent(best_params, value, budget.refinement_iterations, rng);
}

inline std::vector<ComplexMatrix> kraus_of(const Channel& ch) { return to_kraus(ch).operators; }

/// Deterministic DI candidates: identity-like relabelings, permutation unitaries and
/// subsystem swaps when the shapes allow.
inline std::vector<Channel> structured_di_candidates(Eigen::Index da, Eigen::Index db) {
  std::vector<Channel> out;
  if (da == db) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(da));
    std::iota(perm.begin(), perm.end(), 0);
    const std::vector<double> zero(perm.size(), 0.0);
    std::size_t count = 0;
    do {
      out.push_back(permutation_phase_channel(perm, zero));
    } while (std::next_permutation(perm.begin(), perm.end()) && ++count < 24);
    for (Eigen::Index f = 2; f * f <= da; ++f) {
      if (da % f == 0) {
        out.push_back(swap(f, da / f));
        if (f != da / f) out.push_back(swap(da / f, f));
      }
    }
  } else if (da < db) {
    // Isometric relabelings |i> -> |t_i> onto every ordered choice of da output levels.
    std::vector<Eigen::Index> levels(static_cast<std::size_t>(db));
    std::iota(levels.begin(), levels.end(), 0);
    std::size_t count = 0;
    do {
      ComplexMatrix v = ComplexMatrix::Zero(db, da);
      for (Eigen::Index i = 0; i < da; ++i) v(levels[static_cast<std::size_t>(i)], i) = 1.0;
      KrausSet ks;
      ks.operators.push_back(v);
      out.push_back(from_kraus(ks));
      // Skip orderings of the unused tail; they give the same isometry.
      std::reverse(levels.begin() + da, levels.end());
    } while (std::next_permutation(levels.begin(), levels.end()) && ++count < 24);
  } else {
    out.push_back(canonical_embedding(da, db));
  }
  return out;
}

}  // namespace search_detail

/// max of F_direct over sampled (DI pre-processing, pure state) pairs,
/// refined by local ascent. A certified lower bound on the SDP value F.
inline double brute_force_f_lower(const Channel& theta, const GameConfig& cfg, const SearchBudget& budget,
                                  unsigned threads = 1) {
  using namespace search_detail;
  cfg.validate();
  budget.validate();
  const Eigen::Index da = cfg.dim();
  const Eigen::Index db = theta.dim_in();
  const ComplexMatrix weights = signal_weights(cfg);
  Rng rng(budget.rng_seed);

  double best = cfg.prior_gap();  // any incoherent input attains |lambda - mu|

  for (const auto& phi : structured_di_candidates(da, db)) {
    const auto ks = kraus_of(phi);
    best = std::max(best, best_state_for(theta, ks, weights, budget, rng));
  }

  // Joint random sampling over the complete DI parametrization and pure states.
  const DiParametrization param{da, db, da * db};
  const std::size_t n_di = param.size();
  auto joint_value = [&](std::span<const double> p) {
    const Channel phi = param.channel(p.first(n_di));
    const ComplexVector v = unit_vector(p.subspan(n_di));
    const ComplexMatrix signal = weights.cwiseProduct(v * v.adjoint());
    return diagonal_l1(apply_map(theta, apply_map(phi, signal)));
  };

  const std::size_t samples = budget.random_samples;
  std::vector<double> values(samples);
  std::vector<std::vector<double>> params(samples);
  auto draw = [&](std::size_t s) {
    Rng local(stream_seed(budget.rng_seed, s));
    auto p = param.random_parameters(local);
    const auto psi = vector_params(random_pure_vector(da, local));
    p.insert(p.end(), psi.begin(), psi.end());
    values[s] = joint_value(p);
    params[s] = std::move(p);
  };
  const unsigned workers = std::max(1U, threads);
  if (workers == 1) {
    for (std::size_t s = 0; s < samples; ++s) draw(s);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < samples; s += workers) draw(s);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<std::size_t> order(samples);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top = std::min<std::size_t>(8, samples);
  // A random walk needs more steps as the parameter count grows.
  const std::size_t ascent_steps = budget.refinement_iterations * std::max<std::size_t>(1, (n_di + 9) / 10);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  for (std::size_t r = 0; r < top; ++r) {
    auto p = params[order[r]];
    Rng local(stream_seed(budget.rng_seed ^ 0xabcdefULL, r));
    best = std::max(best, local_ascent(p, joint_value, ascent_steps, local));
  }
  return best;
}

}  // namespace dynco

#endif  // DYNCO_SEARCH_BRUTE_FORCE_HPP
