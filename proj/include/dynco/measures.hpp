#ifndef DYNCO_MEASURES_HPP
#define DYNCO_MEASURES_HPP

// Discrimination quantities of the phase-guessing game: Alice applies the
// phase channel Lambda_phi with probability mu = 1 - lambda, and Bob tries to
// tell whether she did.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dynco/channels.hpp"
#include "dynco/linalg.hpp"
#include "dynco/state.hpp"

namespace dynco {

struct GameConfig {
  double lambda = 0.5;
  std::vector<double> phi;

  GameConfig() = default;
  GameConfig(double lambda_, std::vector<double> phi_) : lambda(lambda_), phi(std::move(phi_)) { validate(); }

  double mu() const { return 1.0 - lambda; }
  double prior_gap() const { return std::abs(lambda - mu()); }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(phi.size()); }

  void validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("GameConfig: lambda outside [0, 1]");
    if (phi.empty()) throw ValidationError("GameConfig: empty phase vector");
    for (double p : phi) {
      if (!std::isfinite(p)) throw ValidationError("GameConfig: non-finite phase");
    }
  }

  /// At least two phases differ, so Lambda_phi is not the identity.
  bool nontrivial_phases() const {
    for (double p : phi) {
      if (p != phi.front()) return true;
    }
    return false;
  }
};

/// Incoherent two-or-more outcome measurement: diagonal PSD elements summing to I.
class IncoherentPovm {
 public:
  explicit IncoherentPovm(std::vector<ComplexMatrix> elements, double tol = 1e-9) : elements_(std::move(elements)) {
    if (elements_.empty()) throw ValidationError("IncoherentPovm: no elements");
    const Eigen::Index d = elements_.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& e : elements_) {
      if (e.rows() != d || e.cols() != d) throw DimensionError("IncoherentPovm: element shapes differ");
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
          if (i != j && std::abs(e(i, j)) > tol) throw ValidationError("IncoherentPovm: element is not diagonal");
        }
        if (e(i, i).real() < -tol || std::abs(e(i, i).imag()) > tol) {
          throw ValidationError("IncoherentPovm: element is not positive semidefinite");
        }
      }
      sum += e;
    }
    if (max_abs(sum - ComplexMatrix::Identity(d, d)) > tol) {
      throw ValidationError("IncoherentPovm: elements do not sum to identity");
    }
  }

  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  Eigen::Index dim() const { return elements_.front().rows(); }

  /// Born probabilities tr(P_n sigma).
  std::vector<double> probabilities(const ComplexMatrix& sigma) const {
    std::vector<double> p;
    p.reserve(elements_.size());
    for (const auto& e : elements_) p.push_back((e * sigma).trace().real());
    return p;
  }

 private:
  std::vector<ComplexMatrix> elements_;
};

/// lambda * id - mu * Lambda_phi. Hermiticity preserving; neither CP nor TP unless mu = 0.
inline LinearMap signal_map(const GameConfig& cfg) {
  cfg.validate();
  const Channel id = identity_channel(cfg.dim());
  const Channel lam = phase_channel(cfg.phi);
  return cfg.lambda * static_cast<const LinearMap&>(id) - cfg.mu() * static_cast<const LinearMap&>(lam);
}

/// || Delta Theta Phi (lambda - mu Lambda_phi)(rho) ||_1
inline double f_direct(const LinearMap& theta, const LinearMap& pre, const DensityMatrix& rho, const GameConfig& cfg) {
  if (rho.dim() != cfg.dim()) throw DimensionError("f_direct: state dimension differs from phase vector");
  if (pre.dim_in() != cfg.dim()) throw DimensionError("f_direct: pre-processing input differs from phase vector");
  if (pre.dim_out() != theta.dim_in()) throw DimensionError("f_direct: pre-processing output differs from theta input");
  const ComplexMatrix signal = apply_map(signal_map(cfg), rho.matrix());
  const ComplexMatrix out = apply_map(theta, apply_map(pre, signal));
  // Delta leaves only the diagonal, whose trace norm is the sum of |entries|.
  double total = 0.0;
  for (Eigen::Index n = 0; n < out.rows(); ++n) total += std::abs(out(n, n).real());
  return total;
}

inline void require_pair(const GameConfig& cfg, const DensityMatrix& sigma0, const DensityMatrix& sigma1,
                         const char* what) {
  cfg.validate();
  if (sigma0.dim() != sigma1.dim()) throw DimensionError(std::string(what) + ": states differ in dimension");
}

/// lambda sigma0 - mu sigma1
inline ComplexMatrix weighted_difference(const GameConfig& cfg, const DensityMatrix& sigma0, const DensityMatrix& sigma1) {
  return cfg.lambda * sigma0.matrix() - cfg.mu() * sigma1.matrix();
}

/// || lambda sigma0 - mu sigma1 ||_1
inline double helstrom_norm(const GameConfig& cfg, const DensityMatrix& sigma0, const DensityMatrix& sigma1) {
  require_pair(cfg, sigma0, sigma1, "helstrom_norm");
  return trace_norm_hermitian(HermitianView(weighted_difference(cfg, sigma0, sigma1), 1e-9));
}

/// Optimal bias over 1/2 reachable with incoherent measurements.
inline double measurement_bias(const GameConfig& cfg, const DensityMatrix& sigma0, const DensityMatrix& sigma1) {
  require_pair(cfg, sigma0, sigma1, "measurement_bias");
  const ComplexMatrix diff = weighted_difference(cfg, sigma0, sigma1);
  double total = 0.0;
  for (Eigen::Index n = 0; n < diff.rows(); ++n) total += std::abs(diff(n, n).real());
  return 0.5 * total;
}

/// Bias over 1/2 from betting on the prior alone.
inline double trivial_bias(const GameConfig& cfg) {
  cfg.validate();
  return 0.5 * cfg.prior_gap();
}

/// {P0, P1}: P0 projects onto the nonnegative diagonal entries of
/// Delta(lambda sigma0 - mu sigma1) (outcome 0 = "not applied"), P1 = I - P0.
/// Zero entries go to P0.
inline IncoherentPovm optimal_incoherent_povm(const GameConfig& cfg, const DensityMatrix& sigma0,
                                              const DensityMatrix& sigma1) {
  require_pair(cfg, sigma0, sigma1, "optimal_incoherent_povm");
  const ComplexMatrix diff = weighted_difference(cfg, sigma0, sigma1);
  const Eigen::Index d = diff.rows();
  ComplexMatrix p0 = ComplexMatrix::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    if (diff(n, n).real() >= 0.0) p0(n, n) = 1.0;
  }
  return IncoherentPovm({p0, ComplexMatrix::Identity(d, d) - p0});
}

/// Success probability of the two-outcome decision rule "outcome 0 means not applied".
inline double decision_success(const GameConfig& cfg, const IncoherentPovm& povm, const DensityMatrix& sigma0,
                               const DensityMatrix& sigma1) {
  if (povm.elements().size() != 2) throw ValidationError("decision_success: POVM must have two outcomes");
  return cfg.lambda * povm.probabilities(sigma0.matrix())[0] + cfg.mu() * povm.probabilities(sigma1.matrix())[1];
}

/// 1/2 + 1/2 (measure + |lambda - mu|); throws if that exceeds 1 (invalid measure value).
inline double success_probability(double measure_value, const GameConfig& cfg) {
  cfg.validate();
  if (!(measure_value >= -1e-9)) throw ValidationError("success_probability: negative measure value");
  const double p = 0.5 + 0.5 * (measure_value + cfg.prior_gap());
  if (p > 1.0 + 1e-9) {
    throw ValidationError("success_probability: " + std::to_string(p) + " exceeds 1, invalid measure value");
  }
  return p;
}

/// Optimal input state and DI pre-processing recovered from an SDP optimum.
struct ExtractionResult {
  std::vector<double> sigma_diag;
  std::optional<DensityMatrix> rho_opt;
  std::optional<Channel> phi_opt;
  /// Weight of the maximally mixed Choi component blended in to absorb
  /// solver-noise negativity (0 when none was needed).
  double psd_repair = 0.0;
};

/// Result of evaluating the pre-processed improvement M = F - |lambda - mu|.
struct MeasureReport {
  double value = 0.0;    // M
  double f_value = 0.0;  // F = max over programs
  std::vector<std::vector<int>> sign_vectors;
  std::vector<double> per_sign_values;
  std::size_t winning_index = 0;
  ComplexMatrix x_opt;
  ExtractionResult extraction;
  double verification_residual = 0.0;
  double max_duality_gap = 0.0;
};

}  // namespace dynco

#endif  // DYNCO_MEASURES_HPP
