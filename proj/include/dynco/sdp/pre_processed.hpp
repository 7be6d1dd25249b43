#ifndef DYNCO_SDP_PRE_PROCESSED_HPP
#define DYNCO_SDP_PRE_PROCESSED_HPP

// Exact evaluation of the pre-processed improvement
//
//     M(Theta) = max_{Phi in DI, rho} || Delta Theta Phi (lambda - mu Lambda_phi)(rho) ||_1 - |lambda - mu|
//
// as a maximum of linear-objective SDPs, one per output sign pattern s:
//
//     maximize   sum_n s_n <n| Theta(Z) |n>,   Z = sum_{i,j} (lambda - mu e^{i(phi_i - phi_j)}) <i|X|j>
//     subject to X_AB >= 0, tr X = 1, (tr_B X)_{ij} = 0 and diag(<i|X|j>) = 0 for i != j.
//
// The population vector sigma of tr_B X is not a separate variable; its
// nonnegativity follows from X >= 0. From an optimal X the input state
// rho = sum sqrt(sigma_i sigma_j)|i><j| and a DI pre-processing achieving the
// optimum are reconstructed explicitly.

#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "dynco/channels.hpp"
#include "dynco/measures.hpp"
#include "dynco/sdp/problem.hpp"
#include "dynco/sdp/solver.hpp"

namespace dynco {

inline constexpr int kMaxSignVectorLength = 20;
inline constexpr double kSupportThreshold = 1e-9;

class SignVector {
 public:
  explicit SignVector(std::vector<int> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("SignVector: empty");
    for (int e : entries_) {
      if (e != 1 && e != -1) throw ValidationError("SignVector: entries must be +1 or -1");
    }
  }

  const std::vector<int>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t n) const { return entries_[n]; }

  /// All entries equal: the objective is then +-tr Theta(Z) = +-(lambda - mu) on the feasible set.
  bool constant() const {
    for (int e : entries_) {
      if (e != entries_.front()) return false;
    }
    return true;
  }

 private:
  std::vector<int> entries_;
};

namespace detail {

inline void require_sign_length(int n) {
  if (n < 1) throw ValidationError("sign vectors: length must be >= 1");
  if (n > kMaxSignVectorLength) {
    throw ValidationError("sign vectors: length " + std::to_string(n) + " exceeds the limit of " +
                          std::to_string(kMaxSignVectorLength));
  }
}

/// Bit q of `code` set means entry q is -1.
inline SignVector sign_vector_from_bits(int n, std::uint32_t code) {
  std::vector<int> e(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) e[static_cast<std::size_t>(q)] = ((code >> q) & 1U) != 0U ? -1 : 1;
  return SignVector(std::move(e));
}

}  // namespace detail

/// The 2^(N-1) sign vectors with first entry +1.
inline std::vector<SignVector> enumerate_sign_vectors(int n) {
  detail::require_sign_length(n);
  std::vector<SignVector> out;
  for (std::uint32_t code = 0; code < (1U << n); ++code) {
    if ((code & 1U) == 0U) out.push_back(detail::sign_vector_from_bits(n, code));
  }
  return out;
}

/// All 2^N sign vectors.
inline std::vector<SignVector> enumerate_all_sign_vectors(int n) {
  detail::require_sign_length(n);
  std::vector<SignVector> out;
  for (std::uint32_t code = 0; code < (1U << n); ++code) out.push_back(detail::sign_vector_from_bits(n, code));
  return out;
}

/// One sign-pattern program. Block 0 is X_AB with basis index a * dim_B + b.
inline sdp::SdpProblem build_sign_program(const Channel& theta, const GameConfig& cfg, const SignVector& s) {
  cfg.validate();
  const Eigen::Index da = cfg.dim();
  const Eigen::Index db = theta.dim_in();
  if (static_cast<Eigen::Index>(s.size()) != theta.dim_out()) {
    throw DimensionError("build_sign_program: sign vector length differs from theta output dimension");
  }
  auto idx = [db](Eigen::Index a, Eigen::Index b) { return a * db + b; };

  sdp::SdpProblem p;
  const std::size_t x = p.add_block("X_AB", da * db);

  sdp::LinearFunctional trace;
  for (Eigen::Index q = 0; q < da * db; ++q) trace.add(x, q, q, 1.0);
  p.add_constraint(std::move(trace), 1.0, "tr X = 1");

  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = i + 1; j < da; ++j) {
      sdp::LinearFunctional partial;
      for (Eigen::Index b = 0; b < db; ++b) partial.add(x, idx(i, b), idx(j, b), 1.0);
      p.add_constraint(std::move(partial), 0.0,
                       "(tr_B X)_" + std::to_string(i) + std::to_string(j) + " = 0");
      for (Eigen::Index b = 0; b < db; ++b) {
        sdp::LinearFunctional entry;
        entry.add(x, idx(i, b), idx(j, b), 1.0);
        p.add_constraint(std::move(entry), 0.0,
                         "diag(<" + std::to_string(i) + "|X|" + std::to_string(j) + ">)_" + std::to_string(b) + " = 0");
      }
    }
  }

  // w_kl = sum_n s_n Theta^{k,l}_{n,n}
  ComplexMatrix w = ComplexMatrix::Zero(db, db);
  for (Eigen::Index k = 0; k < db; ++k) {
    for (Eigen::Index l = 0; l < db; ++l) {
      for (Eigen::Index n = 0; n < theta.dim_out(); ++n) {
        w(k, l) += static_cast<double>(s[static_cast<std::size_t>(n)]) * theta.coeff(k, l, n, n);
      }
    }
  }
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      const Complex c = cfg.lambda - cfg.mu() * std::polar(1.0, cfg.phi[static_cast<std::size_t>(i)] -
                                                                   cfg.phi[static_cast<std::size_t>(j)]);
      for (Eigen::Index k = 0; k < db; ++k) {
        for (Eigen::Index l = 0; l < db; ++l) p.objective.add(x, idx(i, k), idx(j, l), c * w(k, l));
      }
    }
  }
  return p;
}

/// Largest violation of the program's constraints by x (max-entry norm).
inline double sign_program_feasibility_defect(const ComplexMatrix& x, Eigen::Index da, Eigen::Index db) {
  if (x.rows() != da * db || x.cols() != da * db) throw DimensionError("feasibility check: X has wrong size");
  double worst = std::abs(x.trace() - 1.0);
  worst = std::max(worst, hermiticity_defect(x));
  worst = std::max(worst, std::max(0.0, -min_eigenvalue(HermitianView((x + x.adjoint()) / 2.0))));
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      if (i == j) continue;
      for (Eigen::Index b = 0; b < db; ++b) worst = std::max(worst, std::abs(x(i * db + b, j * db + b)));
    }
  }
  return worst;
}

/// Optimal input state and DI pre-processing from a feasible X_AB.
inline ExtractionResult extract_optimal(const ComplexMatrix& x_opt, Eigen::Index da, Eigen::Index db,
                                        double feasibility_tol = 1e-6) {
  const double defect = sign_program_feasibility_defect(x_opt, da, db);
  if (defect > feasibility_tol) {
    throw ValidationError("extract_optimal: X is infeasible (defect " + std::to_string(defect) + ")");
  }
  auto idx = [db](Eigen::Index a, Eigen::Index b) { return a * db + b; };
  ComplexMatrix x = (x_opt + x_opt.adjoint()) / 2.0;
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      if (i == j) continue;
      for (Eigen::Index b = 0; b < db; ++b) x(idx(i, b), idx(j, b)) = 0.0;
    }
  }

  ExtractionResult res;
  res.sigma_diag.resize(static_cast<std::size_t>(da));
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < da; ++i) {
    double s = 0.0;
    for (Eigen::Index b = 0; b < db; ++b) s += x(idx(i, b), idx(i, b)).real();
    res.sigma_diag[static_cast<std::size_t>(i)] = s;
    if (s > kSupportThreshold) support.push_back(i);
  }
  if (support.empty()) throw ValidationError("extract_optimal: tr_B X has empty support");

  ComplexVector amp = ComplexVector::Zero(da);
  for (auto i : support) amp(i) = std::sqrt(res.sigma_diag[static_cast<std::size_t>(i)]);
  res.rho_opt = DensityMatrix::pure(amp);

  // Choi of the reduced map on span{|i> : i in support}.
  const auto ds = static_cast<Eigen::Index>(support.size());
  ComplexMatrix jr(db * ds, db * ds);
  for (Eigen::Index s = 0; s < ds; ++s) {
    for (Eigen::Index t = 0; t < ds; ++t) {
      const Eigen::Index i = support[static_cast<std::size_t>(s)];
      const Eigen::Index j = support[static_cast<std::size_t>(t)];
      const double norm = std::sqrt(res.sigma_diag[static_cast<std::size_t>(i)] * res.sigma_diag[static_cast<std::size_t>(j)]);
      for (Eigen::Index k = 0; k < db; ++k) {
        for (Eigen::Index l = 0; l < db; ++l) jr(k * ds + s, l * ds + t) = x(idx(i, k), idx(j, l)) / norm;
      }
    }
  }
  // Solver noise can leave tiny negative eigenvalues; blend in the completely
  // depolarizing map, which keeps trace preservation and the DI zero pattern.
  const double lo = min_eigenvalue(HermitianView(jr, 1e-9));
  if (lo < 0.0) {
    res.psd_repair = -lo;
    jr = (jr + res.psd_repair * ComplexMatrix::Identity(db * ds, db * ds)) /
         (1.0 + res.psd_repair * static_cast<double>(db));
  }
  if (res.psd_repair > 1e-6) {
    throw SolverError("extract_optimal: pre-processing Choi is not PSD (min eigenvalue " + std::to_string(lo) +
                      "); re-solve at a tighter gap");
  }
  const LinearMap reduced(ds, db, jr);

  // Phi_opt = reduced o Pi, where Pi keeps the support and sends every other
  // basis state to the first support state.
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(da), -1);
  for (Eigen::Index s = 0; s < ds; ++s) slot[static_cast<std::size_t>(support[static_cast<std::size_t>(s)])] = s;
  const ComplexMatrix jphi = choi_from_images(da, db, [&](Eigen::Index a, Eigen::Index b) -> ComplexMatrix {
    const auto sa = slot[static_cast<std::size_t>(a)];
    const auto sb = slot[static_cast<std::size_t>(b)];
    if (sa >= 0 && sb >= 0) return reduced.image(sa, sb);
    if (a == b) return reduced.image(0, 0);
    return ComplexMatrix::Zero(db, db);
  });
  res.phi_opt = Channel(LinearMap(da, db, jphi), 1e-7);
  if (!is_detection_incoherent(*res.phi_opt, 1e-7)) {
    throw SolverError("extract_optimal: recovered pre-processing is not DI; re-solve at a tighter gap");
  }
  return res;
}

/// |F_direct(theta, phi_opt, rho_opt) - reported_value|
inline double verify_extraction(const Channel& theta, const GameConfig& cfg, const ExtractionResult& result,
                                double reported_value) {
  if (!result.phi_opt || !result.rho_opt) throw ValidationError("verify_extraction: empty extraction result");
  return std::abs(f_direct(theta, *result.phi_opt, *result.rho_opt, cfg) - reported_value);
}

enum class SignEnumeration {
  full,    // all 2^N patterns (the two constant ones are evaluated in closed form)
  halved,  // representatives with s_0 = +1 only; exact only for sign-symmetric instances
};

struct EvaluateOptions {
  SignEnumeration enumeration = SignEnumeration::full;
  unsigned threads = 1;
  sdp::SolverOptions solver;
};

/// Pre-processed improvement with per-sign values, optimal X and the
/// extracted (rho_opt, Phi_opt) pair, round-trip verified.
inline MeasureReport evaluate_f(const Channel& theta, const GameConfig& cfg, const EvaluateOptions& opts = {}) {
  cfg.validate();
  if (cfg.dim() < 1) throw DimensionError("evaluate_f: empty phase vector");
  const Eigen::Index da = cfg.dim();
  const Eigen::Index db = theta.dim_in();
  const auto n_out = static_cast<int>(theta.dim_out());
  const std::vector<SignVector> signs = opts.enumeration == SignEnumeration::full
                                            ? enumerate_all_sign_vectors(n_out)
                                            : enumerate_sign_vectors(n_out);

  struct Outcome {
    double value = 0.0;
    bool solved = false;
    sdp::SdpSolution solution;
  };
  std::vector<Outcome> outcomes(signs.size());
  auto work = [&](std::size_t k) {
    const SignVector& s = signs[k];
    if (s.constant()) {
      outcomes[k].value = static_cast<double>(s[0]) * (cfg.lambda - cfg.mu()) + 0.0;  // no -0
      return;
    }
    outcomes[k].solution = sdp::solve_sdp(build_sign_program(theta, cfg, s), opts.solver);
    outcomes[k].value = outcomes[k].solution.objective_value;
    outcomes[k].solved = true;
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(opts.threads, static_cast<unsigned>(signs.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < signs.size(); ++k) work(k);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < signs.size(); k += workers) work(k);
      });
    }
    for (auto& t : pool) t.join();
  }

  MeasureReport report;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    if (outcomes[k].solved && outcomes[k].solution.status != sdp::SdpStatus::optimal) {
      throw SolverError(std::string("evaluate_f: sign-vector program ") + std::to_string(k) + " " +
                        sdp::to_string(outcomes[k].solution.status) + ": " + outcomes[k].solution.diagnostics);
    }
    report.sign_vectors.push_back(signs[k].entries());
    report.per_sign_values.push_back(outcomes[k].value);
    if (outcomes[k].solved) report.max_duality_gap = std::max(report.max_duality_gap, outcomes[k].solution.duality_gap);
    if (k == 0 || outcomes[k].value > outcomes[report.winning_index].value) report.winning_index = k;
  }
  report.f_value = outcomes[report.winning_index].value;
  report.value = report.f_value - cfg.prior_gap();

  if (outcomes[report.winning_index].solved) {
    report.x_opt = outcomes[report.winning_index].solution.variable_values.front();
  } else {
    // Constant pattern wins: every feasible X attains it; use |0><0| (x) |0><0|.
    report.x_opt = ComplexMatrix::Zero(da * db, da * db);
    report.x_opt(0, 0) = 1.0;
  }
  report.extraction = extract_optimal(report.x_opt, da, db);
  report.verification_residual = verify_extraction(theta, cfg, report.extraction, report.f_value);
  return report;
}

}  // namespace dynco

#endif  // DYNCO_SDP_PRE_PROCESSED_HPP
