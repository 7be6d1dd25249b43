#ifndef DYNCO_SDP_PROBLEM_HPP
#define DYNCO_SDP_PROBLEM_HPP

// Small dense complex SDPs in the form
//
//     maximize   Re L_0(X_1, ..., X_B)
//     subject to L_k(X_1, ..., X_B) = b_k      (complex targets)
//                X_b Hermitian, X_b >= 0,
//
// where each L is a sparse linear functional over variable entries.

#include <cstddef>
#include <string>
#include <vector>

#include "dynco/linalg.hpp"

namespace dynco::sdp {

struct Block {
  std::string name;
  Eigen::Index dim = 0;
};

/// coeff * X_block(row, col)
struct Term {
  std::size_t block = 0;
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  Complex coeff = 0.0;
};

struct LinearFunctional {
  std::vector<Term> terms;

  void add(std::size_t block, Eigen::Index row, Eigen::Index col, Complex coeff) {
    if (coeff != Complex(0.0)) terms.push_back({block, row, col, coeff});
  }

  Complex evaluate(const std::vector<ComplexMatrix>& values) const {
    Complex acc = 0.0;
    for (const auto& t : terms) acc += t.coeff * values.at(t.block)(t.row, t.col);
    return acc;
  }

  /// Matrix C_b with L(X) = sum_b tr(C_b X_b).
  ComplexMatrix dual_matrix(std::size_t block, Eigen::Index dim) const {
    ComplexMatrix c = ComplexMatrix::Zero(dim, dim);
    for (const auto& t : terms) {
      if (t.block == block) c(t.col, t.row) += t.coeff;
    }
    return c;
  }
};

struct EqualityConstraint {
  LinearFunctional lhs;
  Complex target = 0.0;
  std::string label;
};

struct SdpProblem {
  std::vector<Block> psd_variables;
  std::vector<EqualityConstraint> equality_constraints;
  LinearFunctional objective;  // maximized (real part)

  std::size_t add_block(std::string name, Eigen::Index dim) {
    psd_variables.push_back({std::move(name), dim});
    return psd_variables.size() - 1;
  }

  void add_constraint(LinearFunctional lhs, Complex target, std::string label = {}) {
    equality_constraints.push_back({std::move(lhs), target, std::move(label)});
  }

  /// Every term references a declared block and an in-range entry, and the
  /// objective is real on Hermitian points (its dual matrix is Hermitian).
  void validate() const {
    if (psd_variables.empty()) throw ValidationError("SdpProblem: no variables");
    for (const auto& b : psd_variables) {
      if (b.dim < 1) throw ValidationError("SdpProblem: block '" + b.name + "' has non-positive dimension");
    }
    auto check = [&](const LinearFunctional& f, const std::string& what) {
      for (const auto& t : f.terms) {
        if (t.block >= psd_variables.size()) {
          throw ValidationError("SdpProblem: " + what + " references undeclared block");
        }
        const Eigen::Index d = psd_variables[t.block].dim;
        if (t.row < 0 || t.col < 0 || t.row >= d || t.col >= d) {
          throw ValidationError("SdpProblem: " + what + " references entry outside block '" +
                                psd_variables[t.block].name + "'");
        }
        if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag())) {
          throw ValidationError("SdpProblem: " + what + " has a non-finite coefficient");
        }
      }
    };
    check(objective, "objective");
    for (const auto& c : equality_constraints) check(c.lhs, "constraint '" + c.label + "'");
    for (std::size_t b = 0; b < psd_variables.size(); ++b) {
      const ComplexMatrix c = objective.dual_matrix(b, psd_variables[b].dim);
      const double scale = std::max(1.0, max_abs(c));
      if (hermiticity_defect(c) > 1e-10 * scale) {
        throw ValidationError("SdpProblem: objective is not real-valued on Hermitian variables");
      }
    }
  }
};

enum class SdpStatus { optimal, infeasible, numerical_failure };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::infeasible:
      return "infeasible";
    case SdpStatus::numerical_failure:
      return "numerical_failure";
  }
  return "unknown";
}

struct SdpSolution {
  std::vector<ComplexMatrix> variable_values;
  double objective_value = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  double primal_infeasibility = 0.0;  // relative
  double dual_infeasibility = 0.0;    // relative
  int iterations = 0;
  SdpStatus status = SdpStatus::numerical_failure;
  std::string diagnostics;
};

struct SolverOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-9;
  int max_iterations = 120;
};

}  // namespace dynco::sdp

#endif  // DYNCO_SDP_PROBLEM_HPP
