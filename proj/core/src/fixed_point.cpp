#include "myga/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>

namespace myga {

MixtureWeights MixtureWeights::from_raw(double base_raw, std::span<const double> threshold_raw) {
  if (!(base_raw > 0.0)) throw std::invalid_argument("mixture weights: base weight must be positive");
  double total = base_raw;
  for (double w : threshold_raw) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixture weights: negative weight");
    total += w;
  }
  MixtureWeights out;
  out.base = base_raw / total;
  out.thresholds.resize(threshold_raw.size());
  for (std::size_t j = 0; j < threshold_raw.size(); ++j) out.thresholds[j] = threshold_raw[j] / total;
  return out;
}

void MixtureWeights::validate(std::size_t num_thresholds) const {
  if (thresholds.size() != num_thresholds) {
    throw std::invalid_argument("mixture weights: " + std::to_string(thresholds.size()) +
                                " shares for " + std::to_string(num_thresholds) + " thresholds");
  }
  if (!(base > 0.0)) throw std::invalid_argument("mixture weights: base share must be positive");
  double total = base;
  for (double w : thresholds) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixture weights: negative share");
    total += w;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("mixture weights: shares do not sum to 1");
  }
}

namespace {

void validate_inputs(std::span<const double> zeta, std::size_t k, const MixtureWeights& weights,
                     std::span<const double> thresholds) {
  require_distribution(zeta, "zeta");
  if (!std::is_sorted(zeta.begin(), zeta.end(), std::greater<>())) {
    throw std::invalid_argument("fixed point: zeta must be non-increasing");
  }
  if (k < 1 || k > zeta.size()) throw std::invalid_argument("fixed point: k out of range");
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    if (!(thresholds[j] > 0.0 && thresholds[j] <= 0.5)) {
      throw std::invalid_argument("fixed point: threshold outside (0, 1/2]");
    }
    if (j > 0 && !(thresholds[j] > thresholds[j - 1])) {
      throw std::invalid_argument("fixed point: thresholds must be strictly increasing");
    }
  }
  weights.validate(thresholds.size());
}

}  // namespace

FixedPointSolution solve_fixed_point(std::span<const double> zeta, std::size_t k,
                                     const MixtureWeights& weights,
                                     std::span<const double> thresholds,
                                     const IterationObserver& observer) {
  validate_inputs(zeta, k, weights, thresholds);
  const std::size_t arms = zeta.size();
  const std::size_t num_s = thresholds.size();
  const std::size_t num_minority = arms - k;

  FixedPointSolution sol;
  sol.first_truncated.assign(num_s, arms);
  if (num_s == 0 || num_minority == 0) {
    sol.q.assign(zeta.begin(), zeta.end());
    if (observer) observer({0, {}});
    return sol;
  }

  // Pivots only ever advance the smallest threshold still sitting on an arm,
  // so the thresholds that have moved past minority arm r always form a prefix
  // of `thresholds`; passed[r] is its length. The denominator
  // 1 - sum_{s passed r} W(s) then equals base + tail[passed[r]].
  std::vector<double> tail(num_s + 1);
  tail[num_s] = weights.base;
  for (std::size_t j = num_s; j-- > 0;) tail[j] = tail[j + 1] + weights.thresholds[j];

  std::vector<std::size_t> passed(num_minority, 0);
  std::vector<double> minority(num_minority);
  for (std::size_t r = 0; r < num_minority; ++r) {
    minority[r] = weights.base * zeta[k + r] / tail[0];
  }

  // Arm r can advance a pivot iff some threshold sits on it (its bucket
  // (passed[r], upper] is non-empty) and the smallest of those is < q(r).
  auto eligible = [&](std::size_t r) {
    const std::size_t upper = r == 0 ? num_s : passed[r - 1];
    return upper > passed[r] && minority[r] > thresholds[passed[r]];
  };

  std::deque<std::size_t> queue;
  std::vector<char> queued(num_minority, 0);
  auto enqueue = [&](std::size_t r) {
    if (!queued[r] && eligible(r)) {
      queue.push_back(r);
      queued[r] = 1;
    }
  };
  for (std::size_t r = 0; r < num_minority; ++r) enqueue(r);

  while (true) {
    if (observer) observer({sol.iterations, minority});
    if (queue.empty()) break;
    const std::size_t r = queue.front();
    queue.pop_front();
    queued[r] = 0;
    if (!eligible(r)) continue;

    ++passed[r];
    ++sol.iterations;
    minority[r] = weights.base * zeta[k + r] / tail[passed[r]];
    enqueue(r);
    if (r + 1 < num_minority) enqueue(r + 1);
  }

  for (std::size_t j = 0; j < num_s; ++j) {
    std::size_t arm = k;
    while (arm < arms && passed[arm - k] > j) ++arm;
    sol.first_truncated[j] = arm;
  }

  sol.q.assign(arms, 0.0);
  const double minority_mass = std::accumulate(minority.begin(), minority.end(), 0.0);
  const double zeta_majority = std::accumulate(zeta.begin(), zeta.begin() + k, 0.0);
  for (std::size_t i = 0; i < k; ++i) sol.q[i] = zeta[i] / zeta_majority * (1.0 - minority_mass);
  std::copy(minority.begin(), minority.end(), sol.q.begin() + k);

  sol.residual = fixed_point_residual(sol.q, zeta, k, weights, thresholds);
  if (!(sol.residual <= kResidualTolerance)) {
    throw std::logic_error("fixed point: residual " + std::to_string(sol.residual) +
                           " exceeds tolerance");
  }
  return sol;
}

double fixed_point_residual(std::span<const double> q, std::span<const double> zeta,
                            std::size_t k, const MixtureWeights& weights,
                            std::span<const double> thresholds) {
  const std::size_t arms = q.size();
  if (zeta.size() != arms || k < 1 || k > arms) {
    throw std::invalid_argument("fixed point residual: dimension mismatch");
  }
  const std::size_t num_s = thresholds.size();
  std::vector<double> head(num_s + 1, 0.0);  // head[c] = sum_{j<c} W(s_j)
  for (std::size_t j = 0; j < num_s; ++j) head[j + 1] = head[j] + weights.thresholds[j];
  std::vector<double> tail(num_s + 1, 0.0);  // tail[c] = sum_{j>=c} W(s_j)
  for (std::size_t j = num_s; j-- > 0;) tail[j] = tail[j + 1] + weights.thresholds[j];

  auto below = [&](double x) {  // #{s : s < x}
    return static_cast<std::size_t>(
        std::lower_bound(thresholds.begin(), thresholds.end(), x) - thresholds.begin());
  };

  double worst = 0.0;
  // sum_s W(s) * D(s) = sum_{j minority} q(j) * sum_{s >= q(j)} W(s)
  double weighted_dropped = 0.0;
  for (std::size_t i = k; i < arms; ++i) {
    const std::size_t c = below(q[i]);
    weighted_dropped += q[i] * tail[c];
    const double mixed = weights.base * zeta[i] + q[i] * head[c];
    worst = std::max(worst, std::abs(q[i] - mixed));
  }
  const double majority = std::accumulate(q.begin(), q.begin() + k, 0.0);
  double factor = tail[0];
  if (weighted_dropped > 0.0) {
    if (!(majority > 0.0)) return INFINITY;
    factor += weighted_dropped / majority;
  }
  for (std::size_t i = 0; i < k; ++i) {
    const double mixed = weights.base * zeta[i] + q[i] * factor;
    worst = std::max(worst, std::abs(q[i] - mixed));
  }
  return worst;
}

double two_arm_fixed_point(double base_mass, const MixtureWeights& weights,
                           std::span<const double> thresholds) {
  if (!(base_mass >= 0.0 && base_mass <= 0.5)) {
    throw std::invalid_argument("two-arm fixed point: base mass outside [0, 1/2]");
  }
  weights.validate(thresholds.size());
  const std::size_t num_s = thresholds.size();

  auto rhs = [&](double x) {
    double value = weights.base * base_mass;
    for (std::size_t j = 0; j < num_s; ++j) {
      if (x > thresholds[j]) value += weights.thresholds[j] * x;
    }
    return value;
  };

  // Piece j: exactly the j smallest thresholds lie strictly below x, so
  // x = base * base_mass / (1 - sum_{i<j} W(s_i)).
  double active = 0.0;
  for (std::size_t j = 0; j <= num_s; ++j) {
    if (j > 0) active += weights.thresholds[j - 1];
    const double x = weights.base * base_mass / (1.0 - active);
    const bool above_lower = j == 0 || x > thresholds[j - 1];
    const bool below_upper = j == num_s || x <= thresholds[j];
    if (above_lower && below_upper && std::abs(x - rhs(x)) <= 1e-12) return x;
  }
  throw std::logic_error("two-arm fixed point: no consistent piece");
}

}  // namespace myga
