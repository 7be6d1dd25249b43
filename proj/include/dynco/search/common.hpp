#ifndef DYNCO_SEARCH_COMMON_HPP
#define DYNCO_SEARCH_COMMON_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dynco/channels.hpp"
#include "dynco/measures.hpp"
#include "dynco/random.hpp"

namespace dynco {

struct SearchBudget {
  std::size_t random_samples = 2000;
  std::size_t grid_resolution = 64;
  std::size_t refinement_iterations = 400;
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (random_samples < 1 || grid_resolution < 1 || refinement_iterations < 1) {
      throw ValidationError("SearchBudget: all counts must be >= 1");
    }
  }
};

namespace search_detail {

/// 2d reals -> unit vector in C^d.
inline ComplexVector unit_vector(std::span<const double> params) {
  const auto d = static_cast<Eigen::Index>(params.size() / 2);
  ComplexVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    v(i) = Complex(params[static_cast<std::size_t>(2 * i)], params[static_cast<std::size_t>(2 * i + 1)]);
  }
  const double n = v.norm();
  if (n < 1e-300) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / n;
}

inline std::vector<double> vector_params(const ComplexVector& v) {
  std::vector<double> p;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    p.push_back(v(i).real());
    p.push_back(v(i).imag());
  }
  return p;
}

/// Entrywise weights c_ij = lambda - mu e^{i(phi_i - phi_j)}, so that
/// (lambda - mu Lambda_phi)(rho) = c o rho.
inline ComplexMatrix signal_weights(const GameConfig& cfg) {
  const Eigen::Index d = cfg.dim();
  ComplexMatrix c(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      c(i, j) = cfg.lambda - cfg.mu() * std::polar(1.0, cfg.phi[static_cast<std::size_t>(i)] -
                                                            cfg.phi[static_cast<std::size_t>(j)]);
    }
  }
  return c;
}

inline double diagonal_l1(const ComplexMatrix& m) {
  double total = 0.0;
  for (Eigen::Index n = 0; n < m.rows(); ++n) total += std::abs(m(n, n).real());
  return total;
}

inline ComplexMatrix apply_kraus(std::span<const ComplexMatrix> kraus, const ComplexMatrix& op) {
  ComplexMatrix out = ComplexMatrix::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& k : kraus) out += k * op * k.adjoint();
  return out;
}

/// |i> -> |i> for i < min(din, dout); inputs beyond dout are sent to |0>.
/// Incoherent in both senses (DI and MIO).
inline Channel canonical_embedding(Eigen::Index din, Eigen::Index dout) {
  if (din == dout) return identity_channel(din);
  KrausSet ks;
  const Eigen::Index m = std::min(din, dout);
  ComplexMatrix k = ComplexMatrix::Zero(dout, din);
  for (Eigen::Index i = 0; i < m; ++i) k(i, i) = 1.0;
  ks.operators.push_back(k);
  for (Eigen::Index j = m; j < din; ++j) {
    ComplexMatrix l = ComplexMatrix::Zero(dout, din);
    l(0, j) = 1.0;
    ks.operators.push_back(l);
  }
  return from_kraus(ks);
}

/// Random-perturbation hill climbing with an adaptive step.
template <typename Objective>
double local_ascent(std::vector<double>& params, Objective&& f, std::size_t iterations, Rng& rng,
                    double step = 0.3) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = f(params);
  std::vector<double> trial(params.size());
  for (std::size_t it = 0; it < iterations && step > 1e-9; ++it) {
    for (std::size_t q = 0; q < params.size(); ++q) trial[q] = params[q] + step * normal(rng);
    const double v = f(trial);
    if (v > best) {
      best = v;
      params.swap(trial);
      step *= 1.3;
    } else {
      step *= 0.93;
    }
  }
  return best;
}

}  // namespace search_detail

}  // namespace dynco

#endif  // DYNCO_SEARCH_COMMON_HPP
