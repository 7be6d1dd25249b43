// Values produced offline by tests/oracles/sign_program_oracle.py (cvxpy with
// an explicit population variable and full sign enumeration).

#include <gtest/gtest.h>

#include "dynco/sdp/pre_processed.hpp"
#include "oracle_channels.hpp"

using namespace dynco;

namespace {

constexpr double kOracleTol = 1e-6;

double m_value(const Channel& theta, double lambda, std::vector<double> phi) {
  return evaluate_f(theta, GameConfig(lambda, std::move(phi))).value;
}

}  // namespace

TEST(Reference, Hadamard) { EXPECT_NEAR(m_value(hadamard(), 0.5, oracle::kPhi), 0.8660254038, kOracleTol); }

TEST(Reference, HadamardMixtureAtHighPrior) {
  EXPECT_NEAR(m_value(hadamard_mixture(0.9), 0.9, oracle::kPhi), 0.0622644652, kOracleTol);
  EXPECT_NEAR(m_value(hadamard_mixture(0.5), 0.9, oracle::kPhi), 0.0, kOracleTol);
}

TEST(Reference, DampedRotation) {
  const Channel th = oracle::damped_rotation(0.3, 0.7);
  EXPECT_NEAR(m_value(th, 0.5, oracle::kPhi), 0.4667800606, kOracleTol);
  EXPECT_NEAR(m_value(th, 0.7, oracle::kPhi), 0.2165350973, kOracleTol);
  EXPECT_NEAR(m_value(th, 0.2, oracle::kPhi), 0.1269260056, kOracleTol);
}

TEST(Reference, DampedRotationPerSignValues) {
  const auto rep = evaluate_f(oracle::damped_rotation(0.3, 0.7), GameConfig(0.2, oracle::kPhi));
  ASSERT_EQ(rep.sign_vectors.size(), 4U);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& s = rep.sign_vectors[k];
    double expect = 0.0;
    if (s[0] == 1 && s[1] == 1) expect = -0.6;
    if (s[0] == 1 && s[1] == -1) expect = 0.45158;
    if (s[0] == -1 && s[1] == 1) expect = 0.72693;
    if (s[0] == -1 && s[1] == -1) expect = 0.6;
    EXPECT_NEAR(rep.per_sign_values[k], expect, 1e-5);
  }
}

TEST(Reference, QutritInput) {
  const Channel th = oracle::qutrit_to_qubit();
  EXPECT_NEAR(m_value(th, 0.5, {0.0, 1.0, 2.5}), 0.7011422148, kOracleTol);
  EXPECT_NEAR(m_value(th, 0.6, oracle::kPhi), 0.4580506170, kOracleTol);
}
