#include "myga/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace myga {

bool is_distribution(std::span<const double> probs, double tol) {
  if (probs.empty()) return false;
  double total = 0.0;
  for (double x : probs) {
    if (!(x >= 0.0) || !std::isfinite(x)) return false;
    total += x;
  }
  return std::abs(total - 1.0) <= tol;
}

void require_distribution(std::span<const double> probs, const char* what) {
  if (!is_distribution(probs)) {
    throw std::invalid_argument(std::string(what) + " is not a probability distribution");
  }
}

Distribution weighted_average(const AdviceSet& advices, std::span<const double> weights) {
  if (advices.empty() || advices.size() != weights.size()) {
    throw std::invalid_argument("weighted_average: " + std::to_string(advices.size()) +
                                " advices vs " + std::to_string(weights.size()) + " weights");
  }
  const std::size_t arms = advices.front().size();
  Distribution mix(arms, 0.0);
  double total_weight = 0.0;
  for (std::size_t e = 0; e < advices.size(); ++e) {
    if (advices[e].size() != arms) {
      throw std::invalid_argument("weighted_average: advice " + std::to_string(e) +
                                  " has wrong number of arms");
    }
    if (!(weights[e] > 0.0)) {
      throw std::invalid_argument("weighted_average: weights must be positive");
    }
    total_weight += weights[e];
    for (std::size_t i = 0; i < arms; ++i) mix[i] += weights[e] * advices[e][i];
  }
  double mass = 0.0;
  for (double& x : mix) {
    x /= total_weight;
    mass += x;
  }
  for (double& x : mix) x /= mass;
  return mix;
}

ArmPermutation ArmPermutation::identity(std::size_t n) {
  ArmPermutation perm;
  perm.forward.resize(n);
  std::iota(perm.forward.begin(), perm.forward.end(), std::size_t{0});
  perm.inverse = perm.forward;
  return perm;
}

Distribution ArmPermutation::to_sorted(std::span<const double> original) const {
  Distribution out(forward.size());
  for (std::size_t j = 0; j < forward.size(); ++j) out[j] = original[forward[j]];
  return out;
}

Distribution ArmPermutation::to_original(std::span<const double> sorted) const {
  Distribution out(forward.size());
  for (std::size_t j = 0; j < forward.size(); ++j) out[forward[j]] = sorted[j];
  return out;
}

SortedDistribution descending_sort(std::span<const double> probs) {
  SortedDistribution result;
  result.perm = ArmPermutation::identity(probs.size());
  auto& fwd = result.perm.forward;
  std::stable_sort(fwd.begin(), fwd.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  for (std::size_t j = 0; j < fwd.size(); ++j) result.perm.inverse[fwd[j]] = j;
  result.values = result.perm.to_sorted(probs);
  return result;
}

std::size_t pivot_index(std::span<const double> sorted) {
  double prefix = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    prefix += sorted[i];
    if (prefix >= 0.5) return i + 1;
  }
  return sorted.size();
}

}  // namespace myga
