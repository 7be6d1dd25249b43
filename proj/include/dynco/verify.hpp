#ifndef DYNCO_VERIFY_HPP
#define DYNCO_VERIFY_HPP

// Quick self-check of the structural properties of the measures, seeded and
// small enough to run in a few seconds. Used by `dynco verify`.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dynco/sdp/pre_processed.hpp"
#include "dynco/search.hpp"

namespace dynco {

struct PropertyCheck {
  std::string name;
  bool passed = false;
  double metric = 0.0;     // worst observed deviation (or the value checked)
  double tolerance = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  SignEnumeration enumeration = SignEnumeration::full;
};

inline std::vector<PropertyCheck> run_verification(const VerifyOptions& vo = {}) {
  EvaluateOptions eo;
  eo.threads = vo.threads;
  eo.enumeration = vo.enumeration;
  const GameConfig cfg(0.5, {2.0 * std::numbers::pi / 3.0, 0.0});
  const double root3_2 = std::sqrt(3.0) / 2.0;
  auto f = [&](const Channel& th, const GameConfig& c) { return evaluate_f(th, c, eo).f_value; };
  auto m = [&](const Channel& th, const GameConfig& c) { return evaluate_f(th, c, eo).value; };

  std::vector<PropertyCheck> out;
  auto record = [&](std::string name, double metric, double tol, bool le = true) {
    out.push_back({std::move(name), le ? metric <= tol : metric > tol, metric, tol});
  };
  std::uint64_t stream = 0;
  auto rng_for = [&] { return Rng(stream_seed(vo.seed, stream++)); };

  {
    Rng rng = rng_for();
    double worst = 0.0;
    const Eigen::Index shapes[][2] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
    for (int n = 0; n < 200; ++n) {
      const auto& s = shapes[n % 4];
      const auto d = index_coeffs(random_channel(s[0], s[1], rng)).channel_identity_defects();
      worst = std::max({worst, d.positivity, d.conjugate_symmetry, d.trace});
    }
    record("index_coefficient_identities", worst, 1e-9);
  }
  {
    Rng rng = rng_for();
    double disagreements = 0.0;
    for (int n = 0; n < 60; ++n) {
      const Channel ch = n % 3 == 0 ? random_di(2, 2, rng) : n % 3 == 1 ? random_mio(2, 2, rng) : random_channel(2, 2, rng);
      if (is_detection_incoherent(ch) != (detection_defect_direct(ch) <= kMembershipTol)) disagreements += 1.0;
      if (is_mio(ch) != (creation_defect_direct(ch) <= kMembershipTol)) disagreements += 1.0;
    }
    record("membership_tests_agree", disagreements, 0.0);
  }
  {
    const auto rep = evaluate_f(hadamard(), cfg, eo);
    record("hadamard_pre_processed_value", std::abs(rep.value - root3_2), 1e-4);
    record("hadamard_round_trip", rep.verification_residual, 1e-6);
    record("hadamard_post_processed_value", std::abs(post_processed_lower(hadamard(), cfg) - root3_2), 1e-4);
  }
  {
    Rng rng = rng_for();
    double worst = 0.0;
    for (int n = 0; n < 10; ++n) worst = std::max(worst, std::abs(m(random_di(2, 2, rng), cfg)));
    record("di_nullity", worst, 1e-6);
  }
  {
    Rng rng = rng_for();
    double worst = 0.0;
    for (int n = 0; n < 5; ++n) worst = std::max(worst, post_processed_lower(random_mio(2, 2, rng), cfg));
    record("mio_post_processed_nullity", worst, 1e-6);
  }
  {
    Rng rng = rng_for();
    double worst = -1.0;
    for (int n = 0; n < 10; ++n) {
      const Channel th = random_channel(2, 2, rng);
      const double base = f(th, cfg);
      worst = std::max(worst, f(compose(random_di(2, 2, rng), th), cfg) - base);
      worst = std::max(worst, f(compose(th, random_di(2, 2, rng)), cfg) - base);
    }
    record("monotonicity", worst, 1e-5);
  }
  {
    Rng rng = rng_for();
    const GameConfig aux(cfg.lambda, {cfg.phi[0], cfg.phi[0], cfg.phi[1], cfg.phi[1]});
    double tensor_dev = 0.0;
    double aux_dev = 0.0;
    for (int n = 0; n < 3; ++n) {
      const Channel th = random_channel(2, 2, rng);
      const double base = m(th, cfg);
      tensor_dev = std::max(tensor_dev, std::abs(m(tensor(th, identity_channel(2)), cfg) - base));
      aux_dev = std::max(aux_dev, std::abs(m(th, aux) - base));
    }
    record("tensor_constancy", tensor_dev, 1e-4);
    record("auxiliary_invariance", aux_dev, 1e-4);
  }
  {
    Rng rng = rng_for();
    double worst = -1.0;
    for (int n = 0; n < 3; ++n) {
      const Channel a = random_channel(2, 2, rng);
      const Channel b = random_channel(2, 2, rng);
      const double ma = m(a, cfg);
      const double mb = m(b, cfg);
      for (double t : {0.25, 0.5, 0.75}) {
        const std::vector<Channel> parts{a, b};
        const std::vector<double> w{t, 1.0 - t};
        worst = std::max(worst, m(mixture(parts, w), cfg) - (t * ma + (1.0 - t) * mb));
      }
    }
    record("convexity", worst, 1e-5);
  }
  {
    Rng rng = rng_for();
    double worst = 0.0;
    double non_di = 0.0;
    for (int n = 0; n < 10; ++n) {
      const auto rep = evaluate_f(random_channel(2, 2, rng), cfg, eo);
      worst = std::max(worst, rep.verification_residual);
      if (!is_detection_incoherent(*rep.extraction.phi_opt, 1e-7)) non_di += 1.0;
    }
    record("extraction_round_trip", worst, 1e-5);
    record("extracted_pre_processing_is_di", non_di, 0.0);
  }
  {
    Rng rng = rng_for();
    double above = -1.0;
    double below = 0.0;
    SearchBudget budget;
    budget.rng_seed = vo.seed;
    for (int n = 0; n < 2; ++n) {
      const Channel th = random_channel(2, 2, rng);
      const double exact = f(th, cfg);
      const double lower = brute_force_f_lower(th, cfg, budget, vo.threads);
      above = std::max(above, lower - exact);
      below = std::max(below, exact - lower);
    }
    record("brute_force_below_sdp", above, 1e-6);
    record("brute_force_close_to_sdp", below, 5e-3);
  }
  {
    const auto ce = swap_counterexample();
    record("counterexample_before", ce.l_before, 1e-6);
    record("counterexample_after", ce.l_after, 0.99, false);
    const GameConfig c = counterexample_config();
    const Channel th = counterexample_channel();
    record("counterexample_pre_processed_unchanged",
           std::abs(f(compose(th, swap(2, 2)), c) - f(th, c)), 1e-5);
  }
  {
    record("faithful_at_half", m(hadamard_mixture(0.05), cfg), 1e-6, false);
    record("unfaithful_at_0.9", m(hadamard_mixture(0.05), GameConfig(0.9, cfg.phi)), 1e-7);
  }
  {
    const auto rep = evaluate_f(hadamard(), cfg, eo);
    const auto pipe = optimal_pipeline(hadamard(), cfg, rep.extraction);
    const auto g = monte_carlo_game(hadamard(), pipe.phi_pre, pipe.rho, pipe.povm, cfg, 100000, vo.seed, vo.threads);
    record("guessing_game_z_score", std::abs(g.z_score), 4.0);
  }
  return out;
}

}  // namespace dynco

#endif  // DYNCO_VERIFY_HPP
