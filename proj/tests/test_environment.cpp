#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "myga/environment.hpp"

namespace myga {
namespace {

EnvSpec make_spec(EnvKind kind, std::size_t arms, std::size_t experts, std::size_t horizon,
                  std::uint64_t seed) {
  EnvSpec spec;
  spec.kind = kind;
  spec.arms = arms;
  spec.num_experts = experts;
  spec.horizon = horizon;
  spec.seed = seed;
  return spec;
}

double expert_loss(const RoundData& rd, std::size_t e) {
  double total = 0.0;
  for (std::size_t i = 0; i < rd.losses.size(); ++i) total += rd.advices[e][i] * rd.losses[i];
  return total;
}

TEST(Environment, GenerationIsPureAndWellFormed) {
  for (EnvKind kind : {EnvKind::zero_loss_expert, EnvKind::stochastic_gap,
                       EnvKind::adversarial_minority}) {
    const auto spec = make_spec(kind, 4, 5, 200, 99);
    for (std::size_t t = 1; t <= spec.horizon; ++t) {
      const RoundData a = generate(spec, t);
      const RoundData b = generate(spec, t);
      ASSERT_EQ(a.losses, b.losses);
      ASSERT_EQ(a.advices, b.advices);
      ASSERT_EQ(a.advices.size(), 5u);
      for (double x : a.losses) ASSERT_TRUE(x >= 0.0 && x <= 1.0);
      for (const auto& adv : a.advices) ASSERT_TRUE(is_distribution(adv));
    }
    EXPECT_THROW(generate(spec, 0), std::out_of_range);
    EXPECT_THROW(generate(spec, 201), std::out_of_range);
  }
}

TEST(Environment, SeedsGiveDifferentStreams) {
  const auto a = generate(make_spec(EnvKind::zero_loss_expert, 3, 3, 10, 1), 5);
  const auto b = generate(make_spec(EnvKind::zero_loss_expert, 3, 3, 10, 2), 5);
  EXPECT_NE(a.losses, b.losses);
}

TEST(Environment, ZeroLossExpertNeverLoses) {
  const auto spec = make_spec(EnvKind::zero_loss_expert, 3, 4, 2000, 5);
  double total = 0.0;
  for (std::size_t t = 1; t <= spec.horizon; ++t) total += expert_loss(generate(spec, t), 0);
  EXPECT_EQ(total, 0.0);
}

TEST(Environment, DeterministicGapLimit) {
  auto spec = make_spec(EnvKind::stochastic_gap, 3, 3, 500, 8);
  spec.best_mean = 0.0;
  spec.gap = 1.0;
  std::vector<double> totals(3, 0.0);
  for (std::size_t t = 1; t <= spec.horizon; ++t) {
    const auto rd = generate(spec, t);
    for (std::size_t e = 0; e < 3; ++e) totals[e] += expert_loss(rd, e);
  }
  std::sort(totals.begin(), totals.end());
  EXPECT_EQ(totals, (std::vector<double>{0.0, 500.0, 500.0}));
}

TEST(Environment, BestExpertLossConcentrates) {
  // Binomial(T, mu) best-expert loss: within 3 standard deviations of mu T.
  const double mu = 0.1;
  const std::size_t horizon = 10000;
  const double tolerance = 3.0 * std::sqrt(horizon * mu * (1.0 - mu));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto spec = make_spec(EnvKind::stochastic_gap, 2, 4, horizon, seed);
    spec.best_mean = mu;
    spec.gap = 0.2;
    std::vector<double> totals(4, 0.0);
    for (std::size_t t = 1; t <= horizon; ++t) {
      const auto rd = generate(spec, t);
      for (std::size_t e = 0; e < 4; ++e) totals[e] += expert_loss(rd, e);
    }
    const double best = *std::min_element(totals.begin(), totals.end());
    EXPECT_NEAR(best, mu * horizon, tolerance) << "seed " << seed;
  }
}

TEST(Replay, RoundTripIsLossless) {
  auto spec = make_spec(EnvKind::zero_loss_expert, 3, 4, 50, 17);
  const Replay original = record_replay(spec);
  std::ostringstream first;
  write_replay(first, original);
  std::istringstream in(first.str());
  const Replay loaded = read_replay(in);
  ASSERT_EQ(loaded.rounds.size(), original.rounds.size());
  for (std::size_t t = 0; t < loaded.rounds.size(); ++t) {
    ASSERT_EQ(loaded.rounds[t].losses, original.rounds[t].losses);
    ASSERT_EQ(loaded.rounds[t].advices, original.rounds[t].advices);
  }
  std::ostringstream second;
  write_replay(second, loaded);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(first.str().substr(0, 7), "3 4 50\n");
}

TEST(Replay, FileBackedEnvironment) {
  const auto path = std::filesystem::temp_directory_path() / "myga_replay_env_test.txt";
  auto spec = make_spec(EnvKind::adversarial_minority, 2, 3, 20, 4);
  save_replay(path, record_replay(spec));
  EnvSpec replay_spec;
  replay_spec.kind = EnvKind::replay;
  replay_spec.replay_path = path;
  const Environment env(replay_spec);
  EXPECT_EQ(env.horizon(), 20u);
  EXPECT_EQ(env.num_experts(), 3u);
  for (std::size_t t = 1; t <= 20; ++t) EXPECT_EQ(env.round(t).losses, generate(spec, t).losses);
  std::filesystem::remove(path);
}

TEST(Replay, TruncatedFileNamesIncompleteRound) {
  std::istringstream in("2 2 3\n0 1\n1 0\n0 1\n0.5 0.5\n1 0\n");
  try {
    read_replay(in);
    FAIL() << "expected ReplayError";
  } catch (const ReplayError& e) {
    EXPECT_NE(std::string(e.what()).find("round 2"), std::string::npos) << e.what();
    EXPECT_EQ(e.line(), 7u);
  }
}

TEST(Replay, RejectsSimplexViolation) {
  std::istringstream in("2 1 1\n0 1\n0.5 0.4\n");
  try {
    read_replay(in);
    FAIL() << "expected ReplayError";
  } catch (const ReplayError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("simplex"), std::string::npos);
  }
}

TEST(Replay, RejectsMalformedRows) {
  std::istringstream bad_token("2 1 1\n0 x\n1 0\n");
  EXPECT_THROW(read_replay(bad_token), ReplayError);
  std::istringstream short_row("2 1 1\n0\n1 0\n");
  EXPECT_THROW(read_replay(short_row), ReplayError);
  std::istringstream bad_loss("2 1 1\n0 1.5\n1 0\n");
  EXPECT_THROW(read_replay(bad_loss), ReplayError);
  std::istringstream bad_header("2 1\n");
  EXPECT_THROW(read_replay(bad_header), ReplayError);
  std::istringstream trailing("2 1 1\n0 1\n1 0\n0 1\n");
  EXPECT_THROW(read_replay(trailing), ReplayError);
}

}  // namespace
}  // namespace myga
