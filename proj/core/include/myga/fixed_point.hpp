#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "myga/simplex.hpp"

namespace myga {

inline constexpr double kResidualTolerance = 1e-9;

/// Mixture shares for the fixed-point equation: `base` is the aggregate share
/// of the real experts, `thresholds[j]` the share of the auxiliary expert for
/// the j-th threshold. Together they sum to 1.
struct MixtureWeights {
  double base = 1.0;
  std::vector<double> thresholds;

  /// Normalizes raw non-negative weights. `base_raw` must be positive.
  static MixtureWeights from_raw(double base_raw, std::span<const double> threshold_raw);

  void validate(std::size_t num_thresholds) const;
};

/// Snapshot handed to an IterationObserver before each pivot move.
struct SolverIteration {
  std::size_t iteration;
  std::span<const double> minority;  // q_pi(k+1..K), sorted coordinates
};
using IterationObserver = std::function<void(const SolverIteration&)>;

struct FixedPointSolution {
  Distribution q;
  std::size_t iterations = 0;
  /// first_truncated[j]: 0-based index of the first minority arm zeroed by the
  /// auxiliary expert of thresholds[j]; equals K when it zeroes nothing.
  /// (In 1-based terms this is the pivot pi_s - 1, range [k, K].)
  std::vector<std::size_t> first_truncated;
  double residual = 0.0;
};

/// Finds q with q = W.base * zeta + sum_s W(s) * truncate(q, {k, s}).
///
/// zeta must be non-increasing; thresholds strictly increasing inside (0, 1/2].
/// Moves one auxiliary pivot per iteration through a FIFO of minority arms,
/// O(1) per move, at most (K - k) * |S| moves. Throws std::logic_error if the
/// final residual exceeds kResidualTolerance.
FixedPointSolution solve_fixed_point(std::span<const double> zeta_sorted, std::size_t k,
                                     const MixtureWeights& weights,
                                     std::span<const double> thresholds,
                                     const IterationObserver& observer = {});

/// max_i |q(i) - [W.base * zeta(i) + sum_s W(s) * truncate(q, {k, s})(i)]|,
/// evaluated in O(K log |S| + |S|).
double fixed_point_residual(std::span<const double> q, std::span<const double> zeta_sorted,
                            std::size_t k, const MixtureWeights& weights,
                            std::span<const double> thresholds);

/// Two-arm case: the arm-2 mass x solving x = W.base * base_mass + sum_s W(s) x 1{x > s},
/// found by enumerating the linear pieces of the right-hand side. The smallest
/// piece-consistent solution is returned.
double two_arm_fixed_point(double base_mass, const MixtureWeights& weights,
                           std::span<const double> thresholds);

}  // namespace myga
