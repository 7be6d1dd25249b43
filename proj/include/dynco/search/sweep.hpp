#ifndef DYNCO_SEARCH_SWEEP_HPP
#define DYNCO_SEARCH_SWEEP_HPP

#include <vector>

#include "dynco/sdp/pre_processed.hpp"

namespace dynco {

struct SweepRow {
  double lambda = 0.0;
  double p1 = 0.0;
  double m = 0.0;
};

/// n evenly spaced points on [0, 1], endpoints included.
inline std::vector<double> unit_grid(std::size_t n) {
  if (n < 2) throw ValidationError("unit_grid: need at least two points");
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = static_cast<double>(k) / static_cast<double>(n - 1);
  return g;
}

/// M of p1 * Hadamard + (1 - p1) * id for every (lambda, p1) pair, lambda-major.
inline std::vector<SweepRow> faithfulness_sweep(const std::vector<double>& lambdas, const std::vector<double>& p1_grid,
                                          const std::vector<double>& phi, const EvaluateOptions& opts = {}) {
  if (phi.size() != 2) throw DimensionError("faithfulness_sweep: the Hadamard mixture needs two phases");
  for (double p : p1_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("faithfulness_sweep: p1 outside [0, 1]");
  }
  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size() * p1_grid.size());
  for (double lambda : lambdas) {
    const GameConfig cfg(lambda, phi);
    for (double p1 : p1_grid) rows.push_back({lambda, p1, evaluate_f(hadamard_mixture(p1), cfg, opts).value});
  }
  return rows;
}

}  // namespace dynco

#endif  // DYNCO_SEARCH_SWEEP_HPP
