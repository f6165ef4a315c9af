#include "myga/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace myga {

void TruncationParams::validate(std::size_t arms) const {
  if (k < 1 || k > arms) {
    throw std::invalid_argument("truncation: k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(arms) + "]");
  }
  if (!(threshold >= 0.0 && threshold <= 0.5)) {
    throw std::invalid_argument("truncation: threshold outside [0, 1/2]");
  }
}

double truncated_mass(std::span<const double> q, const TruncationParams& params) {
  params.validate(q.size());
  double dropped = 0.0;
  for (std::size_t i = params.k; i < q.size(); ++i) {
    if (q[i] <= params.threshold) dropped += q[i];
  }
  return params.threshold == 0.0 ? 0.0 : dropped;
}

Distribution truncate(std::span<const double> q, const TruncationParams& params) {
  params.validate(q.size());
  Distribution out(q.begin(), q.end());
  if (params.threshold == 0.0) return out;

  const double majority = std::accumulate(q.begin(), q.begin() + params.k, 0.0);
  if (!(majority > 0.0)) {
    throw std::invalid_argument("truncation: majority arms carry no mass");
  }
  double dropped = 0.0;
  for (std::size_t i = params.k; i < q.size(); ++i) {
    if (q[i] <= params.threshold) {
      dropped += q[i];
      out[i] = 0.0;
    }
  }
  const double scale = 1.0 + dropped / majority;
  for (std::size_t i = 0; i < params.k; ++i) out[i] = q[i] * scale;

  const double in_mass = std::accumulate(q.begin(), q.end(), 0.0);
  const double out_mass = std::accumulate(out.begin(), out.end(), 0.0);
  if (std::abs(out_mass - in_mass) >= kSimplexTolerance) {
    throw std::logic_error("truncation: mass drifted by " + std::to_string(out_mass - in_mass));
  }
  return out;
}

std::vector<double> truncated_at_arm(std::span<const double> q, std::size_t k,
                                     std::span<const double> thresholds, std::size_t arm) {
  if (k < 1 || k > q.size() || arm >= q.size()) {
    throw std::invalid_argument("truncated_at_arm: index out of range");
  }
  std::vector<double> out(thresholds.size());
  const double value = q[arm];
  if (arm >= k) {
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
      out[j] = value > thresholds[j] ? value : 0.0;
    }
    return out;
  }

  const double majority = std::accumulate(q.begin(), q.begin() + k, 0.0);
  if (!(majority > 0.0)) {
    throw std::invalid_argument("truncated_at_arm: majority arms carry no mass");
  }
  std::vector<double> minority(q.begin() + k, q.end());
  std::sort(minority.begin(), minority.end());
  // Sweep thresholds upward; `dropped` is the mass of minority entries <= s.
  std::size_t next = 0;
  double dropped = 0.0;
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    while (next < minority.size() && minority[next] <= thresholds[j]) dropped += minority[next++];
    out[j] = thresholds[j] == 0.0 ? value : value * (1.0 + dropped / majority);
  }
  return out;
}

}  // namespace myga
