#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace myga {

/// Probability vector over K arms. Invariants (non-negative, unit mass) are
/// checked with is_distribution() at construction sites, not carried in the type.
using Distribution = std::vector<double>;

/// One advice distribution per real expert, all over the same K arms.
using AdviceSet = std::vector<Distribution>;

inline constexpr double kSimplexTolerance = 1e-9;

bool is_distribution(std::span<const double> probs, double tol = kSimplexTolerance);

/// Throws std::invalid_argument naming `what` if `probs` is not on the simplex.
void require_distribution(std::span<const double> probs, const char* what);

/// sum_e w(e) * advice_e / sum_e w(e). Renormalizes the result.
Distribution weighted_average(const AdviceSet& advices, std::span<const double> weights);

// forward[j] is the original arm at sorted position j; inverse[forward[j]] == j.
struct ArmPermutation {
  std::vector<std::size_t> forward;
  std::vector<std::size_t> inverse;

  static ArmPermutation identity(std::size_t n);

  std::size_t size() const { return forward.size(); }

  /// out[j] = original[forward[j]]
  Distribution to_sorted(std::span<const double> original) const;
  /// out[forward[j]] = sorted[j]
  Distribution to_original(std::span<const double> sorted) const;
};

struct SortedDistribution {
  Distribution values;
  ArmPermutation perm;
};

/// Non-increasing reordering. Ties keep the lower original arm first.
SortedDistribution descending_sort(std::span<const double> probs);

/// Number of leading arms needed for the prefix mass to reach 1/2, i.e.
/// min{i : sum_{j<=i} sorted(j) >= 1/2} in 1-based terms. Result is in [1, K].
/// The comparison is exact, no tolerance.
std::size_t pivot_index(std::span<const double> sorted);

}  // namespace myga
