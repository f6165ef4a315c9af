#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "myga/fixed_point.hpp"
#include "myga/simplex.hpp"

namespace myga {

struct MygaConfig {
  std::size_t arms = 2;
  std::size_t num_experts = 1;
  std::size_t horizon = 1;
  double eta = 0.5;
  double gamma = 0.5;
  /// Thresholds live on multiples of 1/grid_denominator. 0 selects 2 * horizon.
  std::int64_t grid_denominator = 0;

  std::int64_t denominator() const;
  void validate() const;
};

struct Schedule {
  double eta;
  double gamma;
};

/// Smallest multiple of 1/grid_denominator that is >= x, capped at 1/2.
double round_up_to_grid(double x, std::int64_t grid_denominator);

/// eta = min{1/K, sqrt(ln(N T) / (K max(L*, 1)))}; gamma is 2 eta rounded up to
/// the threshold lattice and capped at 1/2.
Schedule schedule_parameters(std::size_t arms, std::size_t num_experts, std::size_t horizon,
                             double lstar, std::int64_t grid_denominator = 0);

/// Lattice points n / grid_denominator inside (gamma, 1/2], increasing.
std::vector<double> build_threshold_grid(double gamma, std::int64_t grid_denominator);

/// Cumulative estimated losses for the real experts and the auxiliary
/// (threshold) experts. Weights are exp(-eta * loss), evaluated after
/// subtracting the smallest loss.
struct WeightState {
  std::vector<double> expert_loss;
  std::vector<double> threshold_loss;

  double min_loss() const;
  /// Normalized weights over E followed by S.
  std::vector<double> normalized(double eta) const;
};

enum class Fault {
  none,
  /// Test hook: after solving, moves most of the top majority arm's mass to the
  /// last arm, breaking the fixed point the lemma checks rely on.
  depress_majority,
};

struct RoundTrace {
  std::size_t t = 0;  // 1-based
  AdviceSet advices;  // original arm coordinates
  Distribution zeta_sorted;
  ArmPermutation perm;
  std::size_t k = 0;
  Distribution q;  // sorted coordinates
  Distribution p;  // sorted coordinates
  Distribution p_original;
  std::size_t solver_iterations = 0;
  double residual = 0.0;

  // Filled in by update().
  bool played = false;
  std::size_t a_sorted = 0;
  std::size_t a_original = 0;
  double realized_loss = 0.0;
  std::vector<double> estimate;
  std::vector<double> real_advice_at_played;
  std::vector<double> aux_advice_at_played;
};

/// Importance-weighted estimate: loss / p(a) at the played arm, zero elsewhere.
std::vector<double> loss_estimator(std::span<const double> p, std::size_t arm, double loss);

/// Inverse-CDF draw with u in [0, 1). Never returns a zero-probability arm.
std::size_t sample_arm(std::span<const double> p, double u);

class MygaPolicy {
 public:
  explicit MygaPolicy(MygaConfig config);

  RoundTrace advise(const AdviceSet& advices);
  void update(RoundTrace& trace, std::size_t arm_original, double loss);

  const MygaConfig& config() const { return config_; }
  const std::vector<double>& thresholds() const { return thresholds_; }
  const WeightState& state() const { return state_; }
  std::size_t rounds_completed() const { return rounds_; }

  void inject_fault(Fault fault) { fault_ = fault; }

 private:
  MygaConfig config_;
  std::vector<double> thresholds_;
  WeightState state_;
  std::size_t rounds_ = 0;
  Fault fault_ = Fault::none;
};

}  // namespace myga
