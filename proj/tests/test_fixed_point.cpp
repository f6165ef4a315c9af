#include <gtest/gtest.h>

#include <random>

#include "myga/fixed_point.hpp"
#include "myga/truncation.hpp"
#include "test_support.hpp"

namespace myga {
namespace {

TEST(FixedPoint, NoThresholdsReturnsZeta) {
  const Distribution zeta{0.5, 0.3, 0.2};
  const auto sol = solve_fixed_point(zeta, 1, MixtureWeights{}, {});
  EXPECT_EQ(sol.q, zeta);
  EXPECT_EQ(sol.iterations, 0u);
  EXPECT_EQ(fixed_point_residual(zeta, zeta, 1, MixtureWeights{}, {}), 0.0);
}

TEST(FixedPoint, NoMinorityArmsReturnsZeta) {
  const Distribution zeta{0.25, 0.25, 0.25, 0.25};
  const std::vector<double> s{0.1, 0.3};
  const auto w = MixtureWeights::from_raw(1.0, std::vector<double>{1.0, 1.0});
  EXPECT_EQ(solve_fixed_point(zeta, 4, w, s).q, zeta);
}

TEST(FixedPoint, TwoArmTruncatingExample) {
  const Distribution zeta{0.9, 0.1};
  const std::vector<double> s{0.15};
  const MixtureWeights w{0.5, {0.5}};
  const auto sol = solve_fixed_point(zeta, 1, w, s);
  EXPECT_NEAR(sol.q[0], 0.95, 1e-15);
  EXPECT_NEAR(sol.q[1], 0.05, 1e-15);
  EXPECT_EQ(sol.iterations, 0u);
  const auto aux = truncate(sol.q, {1, 0.15});
  EXPECT_NEAR(aux[0], 1.0, 1e-15);
  EXPECT_EQ(aux[1], 0.0);
  EXPECT_NEAR(two_arm_fixed_point(0.1, w, s), 0.05, 1e-15);

  // q = zeta is not a fixed point here: the auxiliary expert moves 0.05.
  EXPECT_NEAR(fixed_point_residual(zeta, zeta, 1, w, s), 0.05, 1e-15);
}

TEST(FixedPoint, TwoArmBoundaryExample) {
  // F(x) = 0.15 + 0.25 x 1{x > 0.1} + 0.25 x 1{x > 0.2} has two fixed points
  // on [0, 1/2]: x = 0.2 (on the piece (0.1, 0.2]) and x = 0.3. The constructive
  // solver stops at the first, as does the smallest-piece enumeration.
  const Distribution zeta{0.7, 0.3};
  const std::vector<double> s{0.1, 0.2};
  const MixtureWeights w{0.5, {0.25, 0.25}};
  const auto sol = solve_fixed_point(zeta, 1, w, s);
  EXPECT_NEAR(sol.q[1], 0.2, 1e-15);
  EXPECT_NEAR(sol.q[0], 0.8, 1e-15);
  EXPECT_EQ(sol.iterations, 1u);
  EXPECT_NEAR(two_arm_fixed_point(0.3, w, s), 0.2, 1e-15);
  EXPECT_LE(testing::naive_residual(sol.q, zeta, 1, w, s), 1e-15);
  EXPECT_LE(testing::naive_residual({0.7, 0.3}, zeta, 1, w, s), 1e-15);

  // Auxiliary advices at the solution.
  const auto low = truncate(sol.q, {1, 0.1});
  const auto high = truncate(sol.q, {1, 0.2});
  EXPECT_NEAR(low[1], 0.2, 1e-15);
  EXPECT_NEAR(high[0], 1.0, 1e-15);
  EXPECT_EQ(high[1], 0.0);
}

TEST(FixedPoint, TwoArmOracleDegenerateCases) {
  EXPECT_EQ(two_arm_fixed_point(0.3, MixtureWeights{}, {}), 0.3);
  EXPECT_THROW(two_arm_fixed_point(0.6, MixtureWeights{}, {}), std::invalid_argument);
}

TEST(FixedPoint, RejectsBadInputs) {
  const Distribution zeta{0.7, 0.3};
  const MixtureWeights w{0.5, {0.5}};
  EXPECT_THROW(solve_fixed_point(zeta, 1, w, std::vector<double>{0.6}), std::invalid_argument);
  EXPECT_THROW(solve_fixed_point(zeta, 1, w, std::vector<double>{0.0}), std::invalid_argument);
  EXPECT_THROW(solve_fixed_point(Distribution{0.3, 0.7}, 1, w, std::vector<double>{0.2}),
               std::invalid_argument);
  EXPECT_THROW(solve_fixed_point(zeta, 1, MixtureWeights{0.5, {0.25}}, std::vector<double>{0.2}),
               std::invalid_argument);
  EXPECT_THROW(solve_fixed_point(zeta, 1, MixtureWeights{0.5, {0.25, 0.25}},
                                 std::vector<double>{0.2, 0.1}),
               std::invalid_argument);
}

TEST(FixedPoint, EfficientResidualMatchesTruncationRoute) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t arms = 2 + trial % 10;
    const Distribution zeta = testing::random_sorted(rng, arms);
    const std::size_t k = pivot_index(zeta);
    const auto s = testing::random_thresholds(rng, trial % 30, trial % 2 ? 100 : 0);
    const auto w = testing::random_weights(rng, s.size());
    const Distribution q = testing::random_sorted(rng, arms);
    ASSERT_NEAR(fixed_point_residual(q, zeta, k, w, s), testing::naive_residual(q, zeta, k, w, s),
                1e-12);
  }
}

// Claims (a)-(d) of the constructive procedure plus the residual contract.
TEST(FixedPoint, RandomizedConstructiveClaims) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 1500; ++trial) {
    const std::size_t arms = 2 + trial % 15;
    const Distribution zeta = testing::random_sorted(rng, arms);
    const std::size_t k = pivot_index(zeta);
    const auto s = testing::random_thresholds(rng, 1 + trial % 64, trial % 3 == 0 ? 128 : 0);
    const auto w = testing::random_weights(rng, s.size());

    std::vector<double> previous;
    bool monotone = true;
    bool nondecreasing = true;
    auto observer = [&](const SolverIteration& it) {
      for (std::size_t r = 1; r < it.minority.size(); ++r) {
        monotone = monotone && it.minority[r - 1] >= it.minority[r];
      }
      if (!previous.empty()) {
        for (std::size_t r = 0; r < it.minority.size(); ++r) {
          nondecreasing = nondecreasing && it.minority[r] >= previous[r];
        }
      }
      previous.assign(it.minority.begin(), it.minority.end());
    };
    const auto sol = solve_fixed_point(zeta, k, w, s, observer);

    ASSERT_TRUE(is_distribution(sol.q));
    ASSERT_LE(sol.iterations, arms * s.size());
    ASSERT_TRUE(monotone) << "trial " << trial;
    ASSERT_TRUE(nondecreasing) << "trial " << trial;
    ASSERT_LE(sol.residual, 1e-9);
    ASSERT_LE(testing::naive_residual(sol.q, zeta, k, w, s), 1e-9);
    for (std::size_t i = k; i < arms; ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        ASSERT_EQ(sol.q[i] > s[j], sol.first_truncated[j] > i) << "trial " << trial;
      }
    }
  }
}

TEST(FixedPoint, SmallArmCountsOnCoarseLattice) {
  // Coarse lattices make exact ties between q(i) and a threshold more likely.
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> numerators(0, 8);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t arms = 2 + trial % 3;
    Distribution zeta(arms);
    for (double& x : zeta) x = 1.0 + numerators(rng);
    const double total = std::accumulate(zeta.begin(), zeta.end(), 0.0);
    for (double& x : zeta) x /= total;
    std::sort(zeta.begin(), zeta.end(), std::greater<>());
    const std::size_t k = pivot_index(zeta);
    const auto s = testing::random_thresholds(rng, 1 + trial % 8, 16);
    std::vector<double> raw(s.size());
    for (double& x : raw) x = 1.0 + numerators(rng);
    const auto w = MixtureWeights::from_raw(1.0 + numerators(rng), raw);
    const auto sol = solve_fixed_point(zeta, k, w, s);
    ASSERT_LE(testing::naive_residual(sol.q, zeta, k, w, s), 1e-9) << "trial " << trial;
  }
}

TEST(FixedPoint, TwoArmOracleAgreesWithSolver) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 2000; ++trial) {
    const Distribution zeta = testing::random_sorted(rng, 2);
    const auto s = testing::random_thresholds(rng, 1 + trial % 64, trial % 2 ? 400 : 0);
    const auto w = testing::random_weights(rng, s.size());
    const auto sol = solve_fixed_point(zeta, 1, w, s);
    ASSERT_NEAR(sol.q[1], two_arm_fixed_point(zeta[1], w, s), 1e-9) << "trial " << trial;
  }
}

}  // namespace
}  // namespace myga
