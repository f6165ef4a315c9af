#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "myga/simplex.hpp"

namespace myga {

/// The first `k` arms (in sorted coordinates) are majority arms, the rest are
/// minority arms. Minority arms holding mass <= `threshold` get truncated.
///
/// threshold must lie in [0, 1/2]. A threshold of exactly 0 truncates nothing
/// and is accepted as the identity operator.
struct TruncationParams {
  std::size_t k = 1;
  double threshold = 0.5;

  void validate(std::size_t arms) const;
};

/// Total mass of the minority arms that truncation zeroes out.
double truncated_mass(std::span<const double> q, const TruncationParams& params);

/// Zeroes each minority arm with q(i) <= threshold and scales every majority
/// arm by (1 + D / Q_maj), D = truncated_mass, Q_maj = majority mass.
/// Throws std::invalid_argument if the majority mass is zero, and
/// std::logic_error if the result drifts off the simplex.
Distribution truncate(std::span<const double> q, const TruncationParams& params);

/// Value of truncate(q, {k, s})[arm] for every s in `thresholds` (strictly
/// increasing). One pass over the thresholds after sorting the minority masses,
/// instead of |S| full truncations.
std::vector<double> truncated_at_arm(std::span<const double> q, std::size_t k,
                                     std::span<const double> thresholds, std::size_t arm);

}  // namespace myga
