#include <gtest/gtest.h>

#include "dynco/random.hpp"
#include "dynco/sdp/solver.hpp"

using namespace dynco;
using namespace dynco::sdp;

namespace {

SdpProblem unit_trace_problem(Eigen::Index d, const ComplexMatrix& c) {
  SdpProblem p;
  const auto x = p.add_block("X", d);
  LinearFunctional tr;
  for (Eigen::Index q = 0; q < d; ++q) tr.add(x, q, q, 1.0);
  p.add_constraint(tr, 1.0, "trace");
  // objective tr(C X) = sum_pq C_qp X_pq
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index q = 0; q < d; ++q) p.objective.add(x, r, q, c(q, r));
  return p;
}

}  // namespace

TEST(Solver, ProjectorObjective) {
  ComplexMatrix c = ComplexMatrix::Zero(2, 2);
  c(0, 0) = 1.0;
  const auto s = solve_sdp(unit_trace_problem(2, c));
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-7);
  EXPECT_LE(s.duality_gap, 1e-8);
}

TEST(Solver, LargestEigenvalueOfPauliX) {
  const auto s = solve_sdp(unit_trace_problem(2, pauli::x()));
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-7);
}

TEST(Solver, LargestEigenvalueOfRandomHermitian) {
  Rng rng(3);
  for (int n = 0; n < 10; ++n) {
    const ComplexMatrix h = random_hermitian(4, rng);
    const auto s = solve_sdp(unit_trace_problem(4, h));
    ASSERT_EQ(s.status, SdpStatus::optimal);
    EXPECT_NEAR(s.objective_value, eig_hermitian(HermitianView(h)).values.maxCoeff(), 1e-7);
    EXPECT_LE(s.primal_infeasibility, 1e-9);
    EXPECT_LE(s.dual_infeasibility, 1e-9);
  }
}

TEST(Solver, ComplexEqualityConstraint) {
  // max Re X_01 with X_01 pinned to 0.25i: objective 0.
  SdpProblem p = unit_trace_problem(2, ComplexMatrix::Zero(2, 2));
  LinearFunctional off;
  off.add(0, 0, 1, 1.0);
  p.add_constraint(off, Complex(0.0, 0.25), "coherence");
  p.objective.add(0, 0, 0, 1.0);
  const auto s = solve_sdp(p);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(std::abs(s.variable_values[0](0, 1) - Complex(0.0, 0.25)), 0.0, 1e-7);
  // X_00 X_11 >= 1/16 caps X_00 at (1 + sqrt(3)/2) / 2
  EXPECT_NEAR(s.objective_value, (1.0 + std::sqrt(0.75)) / 2.0, 1e-6);
}

TEST(Solver, TwoBlocks) {
  SdpProblem p;
  const auto a = p.add_block("A", 2);
  const auto b = p.add_block("B", 3);
  LinearFunctional tr;
  for (Eigen::Index q = 0; q < 2; ++q) tr.add(a, q, q, 1.0);
  for (Eigen::Index q = 0; q < 3; ++q) tr.add(b, q, q, 1.0);
  p.add_constraint(tr, 1.0, "joint trace");
  p.objective.add(a, 0, 0, 1.0);
  p.objective.add(b, 2, 2, 2.0);
  const auto s = solve_sdp(p);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 2.0, 1e-7);
}

TEST(Solver, DependentConstraintsAreTolerated) {
  SdpProblem p = unit_trace_problem(2, pauli::z());
  LinearFunctional twice;
  twice.add(0, 0, 0, 2.0);
  twice.add(0, 1, 1, 2.0);
  p.add_constraint(twice, 2.0, "trace again");
  const auto s = solve_sdp(p);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-7);
}

TEST(Solver, InconsistentEqualitiesReportedInfeasible) {
  SdpProblem p = unit_trace_problem(2, pauli::z());
  LinearFunctional tr;
  tr.add(0, 0, 0, 1.0);
  tr.add(0, 1, 1, 1.0);
  p.add_constraint(tr, 2.0, "conflicting trace");
  const auto s = solve_sdp(p);
  EXPECT_EQ(s.status, SdpStatus::infeasible);
  EXPECT_FALSE(s.diagnostics.empty());
}

TEST(Solver, PsdInfeasibleReported) {
  // X_00 = -1 cannot hold for X >= 0.
  SdpProblem p;
  const auto x = p.add_block("X", 2);
  LinearFunctional e;
  e.add(x, 0, 0, 1.0);
  p.add_constraint(e, -1.0, "negative population");
  p.objective.add(x, 1, 1, 1.0);
  LinearFunctional f;
  f.add(x, 1, 1, 1.0);
  p.add_constraint(f, 1.0, "unit");
  const auto s = solve_sdp(p);
  EXPECT_NE(s.status, SdpStatus::optimal);
}

TEST(Problem, ValidationRejectsBadReferences) {
  SdpProblem p;
  p.add_block("X", 2);
  p.objective.add(1, 0, 0, 1.0);
  EXPECT_THROW(p.validate(), ValidationError);
  SdpProblem q;
  q.add_block("X", 2);
  q.objective.add(0, 0, 2, 1.0);
  EXPECT_THROW(q.validate(), ValidationError);
}

TEST(Problem, ValidationRejectsNonRealObjective) {
  SdpProblem p;
  p.add_block("X", 2);
  p.objective.add(0, 0, 1, 1.0);  // Re X_01 needs the matching X_10 term
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Problem, StatusNames) {
  EXPECT_STREQ(to_string(SdpStatus::optimal), "optimal");
  EXPECT_STREQ(to_string(SdpStatus::infeasible), "infeasible");
  EXPECT_STREQ(to_string(SdpStatus::numerical_failure), "numerical_failure");
}
