#ifndef DYNCO_SDP_SOLVER_HPP
#define DYNCO_SDP_SOLVER_HPP

// Dense primal-dual interior-point method (HKM direction, Mehrotra
// predictor-corrector) for the complex SDPs of problem.hpp.
//
// Complex Hermitian blocks are mapped to real symmetric blocks through
//
//     H = A + iB   ->   [[A, -B], [B, A]],
//
// which preserves positive semidefiniteness and satisfies
// tr(emb(H) Y) = 2 Re tr(H X(Y)) with X(Y) = (Y11 + Y22)/2 + i (Y21 - Y12)/2.
//
// Real standard form:
//     (P) max <C, Y>  s.t. <A_k, Y> = b_k, Y >= 0
//     (D) min b.y     s.t. Z = sum_k y_k A_k - C >= 0

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dynco/linalg.hpp"
#include "dynco/sdp/problem.hpp"

namespace dynco::sdp {

namespace detail {

using BlockMat = std::vector<RealMatrix>;

struct RealSdp {
  std::vector<Eigen::Index> dims;  // real block sizes (twice the complex ones)
  std::vector<BlockMat> a;
  RealVector b;
  BlockMat c;
};

inline double inner(const BlockMat& x, const BlockMat& y) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += x[k].cwiseProduct(y[k]).sum();
  return acc;
}

inline double frobenius(const BlockMat& x) { return std::sqrt(inner(x, x)); }

inline BlockMat scaled_identity(const std::vector<Eigen::Index>& dims, double s) {
  BlockMat out;
  for (auto d : dims) out.push_back(s * RealMatrix::Identity(d, d));
  return out;
}

inline RealMatrix embed(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  RealMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  out.bottomRightCorner(n, n) = h.real();
  return out;
}

inline ComplexMatrix unembed(const RealMatrix& y) {
  const Eigen::Index n = y.rows() / 2;
  ComplexMatrix x(n, n);
  x.real() = (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n)) / 2.0;
  x.imag() = (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n)) / 2.0;
  return (x + x.adjoint()) / 2.0;
}

struct Lowered {
  RealSdp sdp;
  bool inconsistent = false;
  std::string diagnostics;
};

/// Splits complex constraints into real ones, embeds, normalizes rows, drops
/// linearly dependent rows and checks that their targets are consistent.
inline Lowered lower(const SdpProblem& p) {
  Lowered out;
  RealSdp& r = out.sdp;
  for (const auto& blk : p.psd_variables) r.dims.push_back(2 * blk.dim);
  const std::size_t nb = p.psd_variables.size();

  for (std::size_t k = 0; k < nb; ++k) {
    const ComplexMatrix c = p.objective.dual_matrix(k, p.psd_variables[k].dim);
    r.c.push_back(0.5 * embed((c + c.adjoint()) / 2.0));
  }

  std::vector<BlockMat> rows;
  std::vector<double> targets;
  for (const auto& con : p.equality_constraints) {
    BlockMat re(nb);
    BlockMat im(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      const ComplexMatrix c = con.lhs.dual_matrix(k, p.psd_variables[k].dim);
      re[k] = embed((c + c.adjoint()) / 2.0);
      im[k] = embed((c - c.adjoint()) / Complex(0.0, 2.0));
    }
    rows.push_back(std::move(re));
    targets.push_back(2.0 * con.target.real());
    rows.push_back(std::move(im));
    targets.push_back(2.0 * con.target.imag());
  }

  // Stack vectorized rows as columns and find an independent subset.
  Eigen::Index len = 0;
  for (auto d : r.dims) len += d * d;
  const auto m = static_cast<Eigen::Index>(rows.size());
  RealMatrix v = RealMatrix::Zero(len, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::Index pos = 0;
    for (std::size_t k = 0; k < nb; ++k) {
      const auto& blk = rows[static_cast<std::size_t>(j)][k];
      v.col(j).segment(pos, blk.size()) = Eigen::Map<const RealVector>(blk.data(), blk.size());
      pos += blk.size();
    }
  }
  RealVector bt = Eigen::Map<const RealVector>(targets.data(), m);

  std::vector<Eigen::Index> kept;
  if (m > 0) {
    Eigen::ColPivHouseholderQR<RealMatrix> qr(v);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    for (Eigen::Index q = 0; q < rank; ++q) kept.push_back(qr.colsPermutation().indices()(q));
    std::sort(kept.begin(), kept.end());
  }
  if (!kept.empty() && static_cast<Eigen::Index>(kept.size()) < m) {
    RealMatrix vk(len, static_cast<Eigen::Index>(kept.size()));
    RealVector bk(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t q = 0; q < kept.size(); ++q) {
      vk.col(static_cast<Eigen::Index>(q)) = v.col(kept[q]);
      bk(static_cast<Eigen::Index>(q)) = bt(kept[q]);
    }
    const Eigen::ColPivHouseholderQR<RealMatrix> kqr(vk);
    for (Eigen::Index j = 0; j < m; ++j) {
      if (std::binary_search(kept.begin(), kept.end(), j)) continue;
      const RealVector coeffs = kqr.solve(v.col(j));
      const double implied = coeffs.dot(bk);
      if (std::abs(implied - bt(j)) > 1e-8 * (1.0 + std::abs(bt(j)))) {
        out.inconsistent = true;
        out.diagnostics = "dependent equality constraint has inconsistent target";
      }
    }
  } else if (kept.empty()) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (std::abs(bt(j)) > 1e-12) {
        out.inconsistent = true;
        out.diagnostics = "zero constraint with nonzero target";
      }
    }
  }

  r.b.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t q = 0; q < kept.size(); ++q) {
    const auto j = static_cast<std::size_t>(kept[q]);
    const double norm = v.col(kept[q]).norm();
    BlockMat row = rows[j];
    for (auto& blk : row) blk /= norm;
    r.a.push_back(std::move(row));
    r.b(static_cast<Eigen::Index>(q)) = targets[j] / norm;
  }
  return out;
}

inline RealVector apply_a(const RealSdp& s, const BlockMat& x) {
  RealVector out(static_cast<Eigen::Index>(s.a.size()));
  for (std::size_t k = 0; k < s.a.size(); ++k) out(static_cast<Eigen::Index>(k)) = inner(s.a[k], x);
  return out;
}

inline BlockMat apply_at(const RealSdp& s, const RealVector& y) {
  BlockMat out;
  for (auto d : s.dims) out.push_back(RealMatrix::Zero(d, d));
  for (std::size_t k = 0; k < s.a.size(); ++k) {
    const double w = y(static_cast<Eigen::Index>(k));
    if (w == 0.0) continue;
    for (std::size_t q = 0; q < out.size(); ++q) out[q] += w * s.a[k][q];
  }
  return out;
}

/// Largest alpha in [0, inf) with x + alpha dx >= 0 (x positive definite).
inline double max_step(const BlockMat& x, const BlockMat& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < x.size(); ++q) {
    const Eigen::LLT<RealMatrix> llt(x[q]);
    if (llt.info() != Eigen::Success) return 0.0;
    RealMatrix t = llt.matrixL().solve(dx[q]);
    t = llt.matrixL().solve(t.transpose()).transpose();
    t = (t + t.transpose()).eval() / 2.0;
    const Eigen::SelfAdjointEigenSolver<RealMatrix> es(t, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    if (lo < 0.0) alpha = std::min(alpha, -1.0 / lo);
  }
  return alpha;
}

inline BlockMat symmetrized(BlockMat x) {
  for (auto& b : x) b = (b + b.transpose()).eval() / 2.0;
  return x;
}

}  // namespace detail

/// Solves `problem`. Never throws for infeasible or badly conditioned
/// instances; the outcome is reported through SdpSolution::status.
inline SdpSolution solve_sdp(const SdpProblem& problem, const SolverOptions& opts = {}) {
  using namespace detail;
  problem.validate();
  SdpSolution sol;
  Lowered lowered = lower(problem);
  const RealSdp& s = lowered.sdp;
  const std::size_t nb = s.dims.size();

  auto finish_values = [&](const BlockMat& y) {
    sol.variable_values.clear();
    for (std::size_t q = 0; q < nb; ++q) sol.variable_values.push_back(unembed(y[q]));
  };

  if (lowered.inconsistent) {
    sol.status = SdpStatus::infeasible;
    sol.diagnostics = lowered.diagnostics;
    finish_values(scaled_identity(s.dims, 0.0));
    return sol;
  }

  const auto m = static_cast<Eigen::Index>(s.a.size());
  double n_total = 0.0;
  for (auto d : s.dims) n_total += static_cast<double>(d);
  const double norm_b = s.b.norm();
  const double norm_c = frobenius(s.c);

  double xi = std::max(10.0, std::sqrt(n_total));
  for (Eigen::Index k = 0; k < m; ++k) xi = std::max(xi, std::sqrt(n_total) * (1.0 + std::abs(s.b(k))));
  const double eta = std::max({10.0, std::sqrt(n_total), norm_c});
  BlockMat x = scaled_identity(s.dims, xi);
  BlockMat z = scaled_identity(s.dims, eta);
  RealVector y = RealVector::Zero(m);

  int stalled = 0;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    sol.iterations = it;
    const RealVector rp = s.b - apply_a(s, x);
    BlockMat rd = apply_at(s, y);
    for (std::size_t q = 0; q < nb; ++q) rd[q] -= z[q] + s.c[q];
    const double pobj = inner(s.c, x);
    const double dobj = s.b.dot(y);
    const double xz = inner(x, z);
    sol.objective_value = pobj;
    sol.dual_objective = dobj;
    sol.duality_gap = std::max(std::abs(dobj - pobj), xz);
    sol.primal_infeasibility = rp.norm() / (1.0 + norm_b);
    sol.dual_infeasibility = frobenius(rd) / (1.0 + norm_c);

    if (sol.duality_gap <= opts.gap_tol && sol.primal_infeasibility <= opts.feas_tol &&
        sol.dual_infeasibility <= opts.feas_tol) {
      sol.status = SdpStatus::optimal;
      finish_values(x);
      return sol;
    }
    if (dobj < -1e10 * (1.0 + std::abs(pobj))) {
      sol.diagnostics = "dual objective unbounded below (primal infeasible)";
      sol.status = SdpStatus::infeasible;
      finish_values(x);
      return sol;
    }
    if (it == opts.max_iterations || stalled >= 3) break;

    const double mu = xz / n_total;
    BlockMat zinv(nb);
    for (std::size_t q = 0; q < nb; ++q) {
      const Eigen::LLT<RealMatrix> llt(z[q]);
      if (llt.info() != Eigen::Success) {
        sol.diagnostics = "dual slack lost positive definiteness";
        sol.status = SdpStatus::numerical_failure;
        finish_values(x);
        return sol;
      }
      zinv[q] = llt.solve(RealMatrix::Identity(s.dims[q], s.dims[q]));
      zinv[q] = (zinv[q] + zinv[q].transpose()).eval() / 2.0;
    }

    // Schur complement M_kj = <A_k, X A_j Z^-1>.
    RealMatrix schur(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      BlockMat w(nb);
      for (std::size_t q = 0; q < nb; ++q) w[q] = x[q] * s.a[static_cast<std::size_t>(j)][q] * zinv[q];
      for (Eigen::Index k = j; k < m; ++k) {
        schur(k, j) = inner(s.a[static_cast<std::size_t>(k)], w);
        schur(j, k) = schur(k, j);
      }
    }
    Eigen::LDLT<RealMatrix> fact(schur);
    if (fact.info() != Eigen::Success || !fact.isPositive()) {
      const double reg = 1e-14 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
      fact.compute(schur + reg * RealMatrix::Identity(m, m));
      if (fact.info() != Eigen::Success) {
        sol.diagnostics = "Schur complement factorization failed";
        sol.status = SdpStatus::numerical_failure;
        finish_values(x);
        return sol;
      }
    }

    BlockMat xrz(nb);
    for (std::size_t q = 0; q < nb; ++q) xrz[q] = x[q] * rd[q] * zinv[q];
    const RealVector base_rhs = -apply_a(s, xrz) - rp;

    struct Step {
      BlockMat dx, dz;
      RealVector dy;
    };
    auto direction = [&](double target, const BlockMat* corr) {
      BlockMat h(nb);
      for (std::size_t q = 0; q < nb; ++q) {
        h[q] = target * zinv[q] - x[q];
        if (corr != nullptr) h[q] -= (*corr)[q];
      }
      Step st;
      st.dy = fact.solve(apply_a(s, h) + base_rhs);
      st.dz = apply_at(s, st.dy);
      for (std::size_t q = 0; q < nb; ++q) st.dz[q] += rd[q];
      st.dx.resize(nb);
      for (std::size_t q = 0; q < nb; ++q) st.dx[q] = h[q] - x[q] * st.dz[q] * zinv[q];
      st.dx = symmetrized(std::move(st.dx));
      st.dz = symmetrized(std::move(st.dz));
      return st;
    };

    const Step pred = direction(0.0, nullptr);
    const double ap = std::min(1.0, max_step(x, pred.dx));
    const double ad = std::min(1.0, max_step(z, pred.dz));
    double mu_aff = 0.0;
    {
      BlockMat xa = x, za = z;
      for (std::size_t q = 0; q < nb; ++q) {
        xa[q] += ap * pred.dx[q];
        za[q] += ad * pred.dz[q];
      }
      mu_aff = inner(xa, za) / n_total;
    }
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);
    BlockMat corr(nb);
    for (std::size_t q = 0; q < nb; ++q) corr[q] = pred.dx[q] * pred.dz[q] * zinv[q];
    const Step st = direction(sigma * mu, &corr);

    const double gamma = 0.98;
    const double alpha_p = std::min(1.0, gamma * max_step(x, st.dx));
    const double alpha_d = std::min(1.0, gamma * max_step(z, st.dz));
    if (alpha_p < 1e-10 && alpha_d < 1e-10) {
      ++stalled;
    } else {
      stalled = 0;
    }
    for (std::size_t q = 0; q < nb; ++q) {
      x[q] += alpha_p * st.dx[q];
      z[q] += alpha_d * st.dz[q];
    }
    y += alpha_d * st.dy;
  }

  finish_values(x);
  std::ostringstream msg;
  msg << "no certified optimum after " << sol.iterations << " iterations (gap " << sol.duality_gap
      << ", primal infeasibility " << sol.primal_infeasibility << ", dual infeasibility "
      << sol.dual_infeasibility << ")";
  sol.diagnostics = msg.str();
  sol.status = sol.primal_infeasibility > 1e-6 ? SdpStatus::infeasible : SdpStatus::numerical_failure;
  return sol;
}

}  // namespace dynco::sdp

#endif  // DYNCO_SDP_SOLVER_HPP
