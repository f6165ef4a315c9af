#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "myga/simplex.hpp"

namespace myga {

enum class EnvKind { zero_loss_expert, stochastic_gap, adversarial_minority, replay };

std::optional<EnvKind> parse_env_kind(std::string_view name);
std::string_view env_kind_name(EnvKind kind);

struct EnvSpec {
  EnvKind kind = EnvKind::stochastic_gap;
  std::size_t arms = 2;
  std::size_t num_experts = 2;
  std::size_t horizon = 1;
  double best_mean = 0.1;  // stochastic_gap: mean loss of the best arm
  double gap = 0.2;        // stochastic_gap: spacing between consecutive arm means
  std::uint64_t seed = 0;
  std::filesystem::path replay_path;  // replay only

  void validate() const;
};

struct RoundData {
  AdviceSet advices;
  std::vector<double> losses;
};

/// Synthetic round t (1-based) of a non-replay environment. A pure function of
/// (spec, t): every (seed, t) pair draws from its own generator stream.
///
///  - zero_loss_expert: each round one arm has loss 0 and the rest uniform
///    losses; expert 0 always puts all its mass on that arm, the others give
///    random advice. The best expert's loss is 0.
///  - stochastic_gap: Bernoulli losses with means best_mean + r * gap (capped
///    at 1) by rank r, the rank order fixed per seed; expert e always plays
///    arm e mod K.
///  - adversarial_minority: experts put a shrinking, jittered amount of mass
///    on the last arm while losses alternate between favouring it and
///    punishing it. Stresses truncation near the thresholds.
RoundData generate(const EnvSpec& spec, std::size_t t);

struct Replay {
  std::size_t arms = 0;
  std::size_t num_experts = 0;
  std::vector<RoundData> rounds;
};

class ReplayError : public std::runtime_error {
 public:
  ReplayError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Text format, LF-terminated, single-space separated, shortest round-trip
/// decimals:
///   K N T
///   then per round: one line of K losses, N lines of K advice probabilities.
void write_replay(std::ostream& out, const Replay& replay);
Replay read_replay(std::istream& in);
void save_replay(const std::filesystem::path& path, const Replay& replay);
Replay load_replay(const std::filesystem::path& path);

/// Materializes the first `spec.horizon` rounds of a synthetic environment.
Replay record_replay(const EnvSpec& spec);

/// Round source for the harness: synthetic generation or a loaded replay.
class Environment {
 public:
  explicit Environment(EnvSpec spec);

  RoundData round(std::size_t t) const;

  const EnvSpec& spec() const { return spec_; }
  std::size_t arms() const { return spec_.arms; }
  std::size_t num_experts() const { return spec_.num_experts; }
  std::size_t horizon() const { return spec_.horizon; }

 private:
  EnvSpec spec_;
  std::vector<RoundData> replay_;
};

}  // namespace myga
