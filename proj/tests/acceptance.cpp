// Acceptance run: one PASS/FAIL line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dynco/search.hpp"
#include "dynco/sdp/pre_processed.hpp"

using namespace dynco;

namespace {

// Pinned tolerances.
constexpr double kNullityTol = 1e-6;
constexpr double kHadamardTol = 1e-4;
constexpr double kPostUpperSlack = 1e-6;
constexpr double kMonotoneTol = 1e-5;
constexpr double kInvarianceTol = 1e-4;
constexpr double kFaithfulFloor = 1e-6;
constexpr double kUnfaithfulCeil = 1e-7;
constexpr double kEndpointFloor = 1e-3;
constexpr double kKinkRatio = 10.0;
constexpr double kRoundTripTol = 1e-5;
constexpr double kDiTol = 1e-7;
constexpr double kPincerBelow = 5e-3;
constexpr double kPincerAbove = 1e-6;
constexpr double kGameSigmas = 3.0;
constexpr double kCounterBefore = 1e-6;
constexpr double kCounterAfter = 0.99;
constexpr double kCounterFTol = 1e-5;
constexpr double kIdentityTol = 1e-9;

const double kRoot3Half = std::sqrt(3.0) / 2.0;
const GameConfig kHalf(0.5, {2.0 * std::numbers::pi / 3.0, 0.0});

struct Outcome {
  bool passed;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.passed) ++failures;
  std::printf("%s %2d %-28s %s (%.1fs)\n", o.passed ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double m_of(const Channel& th, const GameConfig& cfg) { return evaluate_f(th, cfg).value; }

}  // namespace

int main() {
  criterion(1, "nullity", [] {
    Rng rng(101);
    double di = 0.0;
    double mio = 0.0;
    for (int n = 0; n < 50; ++n) di = std::max(di, std::abs(m_of(random_di(2, 2, rng), kHalf)));
    for (int n = 0; n < 50; ++n) mio = std::max(mio, post_processed_lower(random_mio(2, 2, rng), kHalf));
    return Outcome{di <= kNullityTol && mio <= kNullityTol, fmt("max|M_DI|=%.2e max N_MIO=%.2e", di, mio)};
  });

  criterion(2, "hadamard_pre_processed", [] {
    const auto rep = evaluate_f(hadamard(), kHalf);
    // Lower side: value re-attained by the extracted pair.
    const double attained = rep.value - rep.verification_residual;
    const bool ok = std::abs(rep.value - kRoot3Half) <= kHadamardTol && std::abs(attained - kRoot3Half) <= kHadamardTol &&
                    rep.max_duality_gap <= 1e-6;
    return Outcome{ok, fmt("M=%.9f residual=%.2e gap=%.2e", rep.value, rep.verification_residual, rep.max_duality_gap)};
  });

  criterion(3, "hadamard_post_processed", [] {
    const double v = post_processed_lower(hadamard(), kHalf);
    return Outcome{v >= kRoot3Half - kHadamardTol && v <= kRoot3Half + kPostUpperSlack, fmt("N_lower=%.9f", v)};
  });

  criterion(4, "monotonicity", [] {
    Rng rng(104);
    double worst = -1.0;
    for (int n = 0; n < 50; ++n) {
      const Channel th = random_channel(2, 2, rng);
      const double base = evaluate_f(th, kHalf).f_value;
      worst = std::max(worst, evaluate_f(compose(random_di(2, 2, rng), th), kHalf).f_value - base);
      worst = std::max(worst, evaluate_f(compose(th, random_di(2, 2, rng)), kHalf).f_value - base);
    }
    return Outcome{worst <= kMonotoneTol, fmt("100 pairs, max increase=%.2e", worst)};
  });

  criterion(5, "tensor_auxiliary_invariance", [] {
    Rng rng(105);
    const GameConfig aux(0.5, {kHalf.phi[0], kHalf.phi[0], kHalf.phi[1], kHalf.phi[1]});
    double tensor_dev = 0.0;
    double aux_dev = 0.0;
    for (int n = 0; n < 5; ++n) {
      const Channel th = random_channel(2, 2, rng);
      const double base = m_of(th, kHalf);
      tensor_dev = std::max(tensor_dev, std::abs(m_of(tensor(th, identity_channel(2)), kHalf) - base));
      aux_dev = std::max(aux_dev, std::abs(m_of(th, aux) - base));
    }
    return Outcome{tensor_dev <= kInvarianceTol && aux_dev <= kInvarianceTol,
                   fmt("tensor dev=%.2e auxiliary dev=%.2e", tensor_dev, aux_dev)};
  });

  criterion(6, "faithfulness_sweep", [] {
    std::vector<double> p1;
    for (int k = 1; k <= 50; ++k) p1.push_back(0.02 * k);
    const auto rows = faithfulness_sweep({0.5, 0.9}, p1, kHalf.phi);
    double min_half = 1.0;
    for (std::size_t k = 0; k < p1.size(); ++k) min_half = std::min(min_half, rows[k].m);
    std::vector<double> m9;
    for (std::size_t k = 0; k < p1.size(); ++k) m9.push_back(rows[p1.size() + k].m);
    bool zero_region = false;
    for (std::size_t k = 0; k < p1.size(); ++k) zero_region |= p1[k] >= 0.05 && m9[k] <= kUnfaithfulCeil;
    double jump = 0.0;
    for (std::size_t k = 1; k + 1 < m9.size(); ++k) {
      const double s0 = std::abs(m9[k] - m9[k - 1]);
      const double s1 = std::abs(m9[k + 1] - m9[k]);
      if (s1 > 1e-9) jump = std::max(jump, s1 / std::max(s0, 1e-12));
    }
    const bool ok = min_half > kFaithfulFloor && zero_region && m9.back() > kEndpointFloor && jump > kKinkRatio;
    return Outcome{ok, fmt("min M(0.5)=%.2e M(0.9,p1=1)=%.4f slope jump=%.1e", min_half, m9.back(), jump)};
  });

  criterion(7, "extraction_round_trip", [] {
    Rng rng(107);
    double worst = 0.0;
    int non_di = 0;
    for (int n = 0; n < 60; ++n) {
      const Channel th = n < 50 ? random_channel(2, 2, rng) : random_channel(3, 2, rng);
      const auto rep = evaluate_f(th, kHalf);
      worst = std::max(worst, rep.verification_residual);
      if (!rep.extraction.phi_opt || !is_detection_incoherent(*rep.extraction.phi_opt, kDiTol)) ++non_di;
    }
    return Outcome{worst <= kRoundTripTol && non_di == 0, fmt("max residual=%.2e non-DI=%.0f", worst, non_di)};
  });

  criterion(8, "brute_force_pincer", [] {
    Rng rng(108);
    SearchBudget budget;
    budget.random_samples = 10000;
    double above = -1.0;
    double below = 0.0;
    for (int n = 0; n < 20; ++n) {
      const Channel th = random_channel(2, 2, rng);
      const double exact = evaluate_f(th, kHalf).f_value;
      const double lower = brute_force_f_lower(th, kHalf, budget);
      above = std::max(above, lower - exact);
      below = std::max(below, exact - lower);
    }
    return Outcome{above <= kPincerAbove && below <= kPincerBelow, fmt("max over=%.2e max under=%.2e", above, below)};
  });

  criterion(9, "guessing_game", [] {
    Rng rng(109);
    Channel random_non_free = random_channel(2, 2, rng);
    while (is_detection_incoherent(random_non_free)) random_non_free = random_channel(2, 2, rng);
    double worst_sigma = 0.0;
    double worst_formula = 0.0;
    for (const Channel& th : {hadamard(), random_non_free}) {
      const auto rep = evaluate_f(th, kHalf);
      const auto pipe = optimal_pipeline(th, kHalf, rep.extraction);
      const auto g = monte_carlo_game(th, pipe.phi_pre, pipe.rho, pipe.povm, kHalf, 100000, 9);
      const double expected = 0.5 + 0.5 * (rep.value + kHalf.prior_gap());
      const double sd = std::sqrt(expected * (1.0 - expected) / 1e5);
      worst_sigma = std::max(worst_sigma, std::abs(g.empirical_rate - expected) / sd);
      worst_formula = std::max(worst_formula, std::abs(g.predicted_rate - expected));
    }
    return Outcome{worst_sigma <= kGameSigmas && worst_formula <= 1e-5,
                   fmt("max deviation=%.2f sigma, pipeline vs formula=%.1e", worst_sigma, worst_formula)};
  });

  criterion(10, "swap_counterexample", [] {
    const auto ce = swap_counterexample();
    const GameConfig cfg = counterexample_config();
    const Channel th = counterexample_channel();
    const double df = std::abs(evaluate_f(compose(th, swap(2, 2)), cfg).f_value - evaluate_f(th, cfg).f_value);
    return Outcome{ce.l_before <= kCounterBefore && ce.l_after >= kCounterAfter && df <= kCounterFTol,
                   fmt("L before=%.2e after=%.6f |dF|=%.2e", ce.l_before, ce.l_after, df)};
  });

  criterion(11, "coefficient_identities", [] {
    Rng rng(111);
    const Eigen::Index shapes[][2] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const auto& s = shapes[n % 4];
      const auto d = index_coeffs(random_channel(s[0], s[1], rng)).channel_identity_defects();
      worst = std::max({worst, d.positivity, d.conjugate_symmetry, d.trace});
    }
    int disagree = 0;
    for (int n = 0; n < 300; ++n) {
      const Eigen::Index din = 2 + n % 2;
      const Eigen::Index dout = 2 + (n / 2) % 2;
      const Channel ch = n % 3 == 0 ? random_di(din, dout, rng) : n % 3 == 1 ? random_mio(din, dout, rng)
                                                                             : random_channel(din, dout, rng);
      if (is_detection_incoherent(ch) != (detection_defect_direct(ch) <= kMembershipTol)) ++disagree;
      if (is_mio(ch) != (creation_defect_direct(ch) <= kMembershipTol)) ++disagree;
    }
    return Outcome{worst <= kIdentityTol && disagree == 0, fmt("max defect=%.2e disagreements=%.0f", worst, disagree)};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
