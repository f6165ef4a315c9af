#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "myga/audit.hpp"
#include "myga/environment.hpp"
#include "myga/truncation.hpp"
#include "test_support.hpp"

namespace myga {
namespace {

RoundTrace two_arm_trace(Distribution q, Distribution p) {
  RoundTrace trace;
  trace.t = 1;
  trace.zeta_sorted = {0.7, 0.3};
  trace.perm = ArmPermutation::identity(2);
  trace.k = 1;
  trace.q = std::move(q);
  trace.p = std::move(p);
  trace.p_original = trace.p;
  trace.advices = {{1.0, 0.0}, {0.4, 0.6}};
  return trace;
}

std::size_t audited_run(EnvKind kind, std::size_t arms, std::size_t experts, std::size_t horizon,
                        std::uint64_t seed, Fault fault = Fault::none) {
  EnvSpec spec;
  spec.kind = kind;
  spec.arms = arms;
  spec.num_experts = experts;
  spec.horizon = horizon;
  spec.seed = seed;
  const auto schedule = schedule_parameters(arms, experts, horizon, 0.2 * horizon);
  MygaPolicy policy({arms, experts, horizon, schedule.eta, schedule.gamma, 0});
  policy.inject_fault(fault);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RegretReport report;
  std::size_t violations = 0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const RoundData rd = generate(spec, t);
    RoundTrace trace = policy.advise(rd.advices);
    const std::size_t arm = sample_arm(trace.p_original, unit(rng));
    policy.update(trace, arm, rd.losses[arm]);
    accumulate(report, trace, rd.losses);
    violations += check_round(trace, policy.thresholds(), schedule.gamma).size();
    violations += check_majority_round(trace, rd.losses).size();
  }
  if (!check_majority_bound(report, arms).pass) ++violations;
  return violations;
}

TEST(Audit, CorrectRunsHaveNoViolations) {
  for (EnvKind kind : {EnvKind::zero_loss_expert, EnvKind::stochastic_gap,
                       EnvKind::adversarial_minority}) {
    for (std::size_t arms : {2u, 4u}) {
      EXPECT_EQ(audited_run(kind, arms, 3, 300, 7), 0u) << env_kind_name(kind) << " K=" << arms;
    }
  }
}

TEST(Audit, FaultInjectionIsDetected) {
  EXPECT_GT(audited_run(EnvKind::stochastic_gap, 3, 3, 50, 7, Fault::depress_majority), 0u);
}

TEST(Audit, CorruptedMajorityTriggersLemma6) {
  const auto violations = check_round(two_arm_trace({0.2, 0.8}, {0.2, 0.8}), {}, 0.25);
  ASSERT_FALSE(violations.empty());
  bool floor_hit = false;
  for (const auto& v : violations) {
    EXPECT_EQ(v.check.rfind("lemma6.", 0), 0u) << v.check;
    EXPECT_LT(v.margin, 0.0);
    floor_hit = floor_hit || v.check == "lemma6.majority_floor";
  }
  EXPECT_TRUE(floor_hit);
}

TEST(Audit, CorruptedPlayTriggersLemma7) {
  const auto violations = check_round(two_arm_trace({0.8, 0.2}, {0.79, 0.21}), {}, 0.25);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].check, "lemma7.support_above_q");
  EXPECT_EQ(violations[0].arm, 0u);
  EXPECT_NEAR(violations[0].margin, -0.01, 1e-12);
}

TEST(Audit, AuxiliaryProportionalityChecksEveryThreshold) {
  // q from the two-arm fixed point with S = {0.1, 0.2}: consistent.
  auto good = two_arm_trace({0.8, 0.2}, {1.0, 0.0});
  EXPECT_TRUE(check_round(good, std::vector<double>{0.1, 0.2}, 0.2).empty());
  // Three arms with the majority split not proportional to zeta.
  RoundTrace bad;
  bad.zeta_sorted = {0.4, 0.35, 0.25};
  bad.perm = ArmPermutation::identity(3);
  bad.k = 2;
  bad.q = {0.45, 0.35, 0.2};
  bad.p = bad.q;
  const auto violations = check_round(bad, std::vector<double>{0.3}, 0.1);
  bool lemma5 = false;
  for (const auto& v : violations) lemma5 = lemma5 || v.check == "lemma5.majority_proportional";
  EXPECT_TRUE(lemma5);
}

TEST(Audit, AccumulateTruncatedLoss) {
  RegretReport report;
  const auto trace = two_arm_trace({0.8, 0.2}, {1.0, 0.0});
  accumulate(report, trace, std::vector<double>{0.3, 0.9});
  EXPECT_NEAR(report.player_loss, 0.3, 1e-15);
  EXPECT_NEAR(report.majority_loss, 0.3, 1e-15);
  EXPECT_EQ(report.minority_loss, 0.0);
  EXPECT_NEAR(report.expert_loss[0], 0.3, 1e-15);
  EXPECT_NEAR(report.expert_loss[1], 0.4 * 0.3 + 0.6 * 0.9, 1e-15);
  EXPECT_NEAR(report.regret(), 0.0, 1e-15);

  const RegretReport before = report;
  accumulate(report, trace, std::vector<double>{0.0, 0.0});
  EXPECT_EQ(report.rounds, before.rounds + 1);
  EXPECT_EQ(report.player_loss, before.player_loss);
  EXPECT_EQ(report.majority_loss, before.majority_loss);
  EXPECT_EQ(report.expert_loss, before.expert_loss);

  RegretReport full;
  RoundTrace spread = two_arm_trace({0.6, 0.4}, {0.6, 0.4});
  accumulate(full, spread, std::vector<double>{1.0, 1.0});
  EXPECT_EQ(full.majority_loss + full.minority_loss, 2.0);
  EXPECT_THROW(accumulate(full, spread, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Audit, MajorityBound) {
  RegretReport empty;
  const auto zero = check_majority_bound(empty, 2);
  EXPECT_TRUE(zero.pass);
  EXPECT_EQ(zero.margin, 0.0);

  RegretReport broken;
  broken.player_loss = 0.1;
  broken.majority_loss = 1.0;
  const auto check = check_majority_bound(broken, 2);
  EXPECT_FALSE(check.pass);
  EXPECT_NEAR(check.margin, -0.6, 1e-15);

  auto trace = two_arm_trace({0.8, 0.2}, {0.1, 0.9});
  EXPECT_EQ(check_majority_round(trace, std::vector<double>{1.0, 0.0}).size(), 1u);
  EXPECT_TRUE(check_majority_round(trace, std::vector<double>{1.0, 1.0}).empty());
}

TEST(Audit, TheoremBound) {
  const double log_term = std::log(4.0 * 10000.0);
  EXPECT_NEAR(theorem_bound(2, 4, 10000, 0.0), 2.0 * log_term, 1e-12);
  EXPECT_NEAR(theorem_bound(2, 4, 10000, 100.0), std::sqrt(2.0 * log_term * 100.0) + 2.0 * log_term,
              1e-12);

  RegretReport negative;
  negative.player_loss = 5.0;
  negative.expert_loss = {6.0, 7.0};
  EXPECT_TRUE(evaluate_theorem_bound(negative, 2, 2, 10, 0.0, 1.0).pass);

  RegretReport large;
  large.player_loss = 1000.0;
  large.expert_loss = {0.0};
  const auto check = evaluate_theorem_bound(large, 2, 4, 10000, 0.0, 10.0);
  EXPECT_FALSE(check.pass);
  EXPECT_NEAR(check.margin, 20.0 * log_term - 1000.0, 1e-9);
}

}  // namespace
}  // namespace myga
