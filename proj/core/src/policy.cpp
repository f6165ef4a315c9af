#include "myga/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "myga/truncation.hpp"

namespace myga {

std::int64_t MygaConfig::denominator() const {
  return grid_denominator > 0 ? grid_denominator : 2 * static_cast<std::int64_t>(horizon);
}

void MygaConfig::validate() const {
  if (arms < 2) throw std::invalid_argument("myga: need at least 2 arms");
  if (num_experts < 1) throw std::invalid_argument("myga: need at least 1 expert");
  if (horizon < 1) throw std::invalid_argument("myga: horizon must be positive");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("myga: eta must be positive");
  if (grid_denominator < 0) throw std::invalid_argument("myga: negative grid denominator");
  if (!(gamma > 0.0 && gamma <= 0.5)) throw std::invalid_argument("myga: gamma outside (0, 1/2]");
  const double scaled = gamma * static_cast<double>(denominator());
  if (std::abs(scaled - std::round(scaled)) > 1e-6) {
    throw std::invalid_argument("myga: gamma is not a multiple of 1/" +
                                std::to_string(denominator()));
  }
}

double round_up_to_grid(double x, std::int64_t grid_denominator) {
  if (grid_denominator < 1) throw std::invalid_argument("round_up_to_grid: bad denominator");
  const double d = static_cast<double>(grid_denominator);
  auto n = static_cast<std::int64_t>(std::ceil(x * d));
  while (n > 1 && static_cast<double>(n - 1) / d >= x) --n;
  while (static_cast<double>(n) / d < x) ++n;
  n = std::clamp<std::int64_t>(n, 1, std::max<std::int64_t>(grid_denominator / 2, 1));
  return static_cast<double>(n) / d;
}

Schedule schedule_parameters(std::size_t arms, std::size_t num_experts, std::size_t horizon,
                             double lstar, std::int64_t grid_denominator) {
  if (arms < 2 || num_experts < 1 || horizon < 1 || !(lstar >= 0.0)) {
    throw std::invalid_argument("schedule_parameters: invalid arguments");
  }
  const double k = static_cast<double>(arms);
  // ln(N T) vanishes for a single expert over a single round; keep eta positive.
  const double log_term =
      std::log(std::max(2.0, static_cast<double>(num_experts) * static_cast<double>(horizon)));
  const double eta = std::min(1.0 / k, std::sqrt(log_term / (k * std::max(lstar, 1.0))));

  const std::int64_t den =
      grid_denominator > 0 ? grid_denominator : 2 * static_cast<std::int64_t>(horizon);
  return {eta, round_up_to_grid(2.0 * eta, den)};
}

std::vector<double> build_threshold_grid(double gamma, std::int64_t grid_denominator) {
  if (grid_denominator < 1) throw std::invalid_argument("threshold grid: bad denominator");
  const double d = static_cast<double>(grid_denominator);
  const auto first = static_cast<std::int64_t>(std::llround(gamma * d)) + 1;
  const std::int64_t last = grid_denominator / 2;
  std::vector<double> grid;
  for (std::int64_t n = first; n <= last; ++n) grid.push_back(static_cast<double>(n) / d);
  return grid;
}

double WeightState::min_loss() const {
  double lo = std::numeric_limits<double>::infinity();
  for (double x : expert_loss) lo = std::min(lo, x);
  for (double x : threshold_loss) lo = std::min(lo, x);
  return lo;
}

std::vector<double> WeightState::normalized(double eta) const {
  const double shift = min_loss();
  std::vector<double> w;
  w.reserve(expert_loss.size() + threshold_loss.size());
  for (double x : expert_loss) w.push_back(std::exp(-eta * (x - shift)));
  for (double x : threshold_loss) w.push_back(std::exp(-eta * (x - shift)));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

std::vector<double> loss_estimator(std::span<const double> p, std::size_t arm, double loss) {
  if (arm >= p.size()) throw std::invalid_argument("loss_estimator: arm out of range");
  if (!(loss >= 0.0 && loss <= 1.0)) throw std::invalid_argument("loss_estimator: loss outside [0, 1]");
  if (!(p[arm] > 0.0)) throw std::logic_error("loss_estimator: played arm has zero probability");
  std::vector<double> est(p.size(), 0.0);
  est[arm] = loss / p[arm];
  return est;
}

std::size_t sample_arm(std::span<const double> p, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = p.size();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) continue;
    last_positive = i;
    cumulative += p[i];
    if (u < cumulative) return i;
  }
  if (last_positive == p.size()) throw std::invalid_argument("sample_arm: no positive mass");
  return last_positive;  // u landed in rounding slack above the total mass
}

MygaPolicy::MygaPolicy(MygaConfig config) : config_(config) {
  config_.validate();
  thresholds_ = build_threshold_grid(config_.gamma, config_.denominator());
  state_.expert_loss.assign(config_.num_experts, 0.0);
  state_.threshold_loss.assign(thresholds_.size(), 0.0);
}

RoundTrace MygaPolicy::advise(const AdviceSet& advices) {
  if (advices.size() != config_.num_experts) {
    throw std::invalid_argument("myga: expected " + std::to_string(config_.num_experts) +
                                " advices, got " + std::to_string(advices.size()));
  }
  for (const auto& a : advices) {
    if (a.size() != config_.arms) throw std::invalid_argument("myga: advice has wrong arm count");
    require_distribution(a, "expert advice");
  }

  RoundTrace trace;
  trace.t = rounds_ + 1;
  trace.advices = advices;

  const double eta = config_.eta;
  const double shift = state_.min_loss();
  const double real_shift =
      *std::min_element(state_.expert_loss.begin(), state_.expert_loss.end());

  // zeta uses its own shift so it stays defined when every real weight would
  // underflow relative to the best auxiliary expert.
  std::vector<double> real_weights(advices.size());
  for (std::size_t e = 0; e < advices.size(); ++e) {
    real_weights[e] = std::exp(-eta * (state_.expert_loss[e] - real_shift));
  }
  const Distribution zeta = weighted_average(advices, real_weights);

  double base_raw = 0.0;
  for (double x : state_.expert_loss) base_raw += std::exp(-eta * (x - shift));
  base_raw = std::max(base_raw, std::numeric_limits<double>::min());
  std::vector<double> aux_raw(thresholds_.size());
  for (std::size_t j = 0; j < thresholds_.size(); ++j) {
    aux_raw[j] = std::exp(-eta * (state_.threshold_loss[j] - shift));
  }
  const MixtureWeights weights = MixtureWeights::from_raw(base_raw, aux_raw);

  auto sorted = descending_sort(zeta);
  trace.zeta_sorted = std::move(sorted.values);
  trace.perm = std::move(sorted.perm);
  trace.k = pivot_index(trace.zeta_sorted);

  auto solution = solve_fixed_point(trace.zeta_sorted, trace.k, weights, thresholds_);
  trace.q = std::move(solution.q);
  trace.solver_iterations = solution.iterations;
  trace.residual = solution.residual;

  if (fault_ == Fault::depress_majority) {
    const double moved = trace.q[0] * 0.9;
    trace.q[0] -= moved;
    trace.q.back() += moved;
  }

  trace.p = truncate(trace.q, {trace.k, config_.gamma});
  trace.p_original = trace.perm.to_original(trace.p);
  return trace;
}

void MygaPolicy::update(RoundTrace& trace, std::size_t arm_original, double loss) {
  if (trace.t != rounds_ + 1 || trace.played) {
    throw std::logic_error("myga: trace for round " + std::to_string(trace.t) +
                           " does not match policy round " + std::to_string(rounds_ + 1));
  }
  if (arm_original >= config_.arms) throw std::invalid_argument("myga: arm out of range");

  trace.a_original = arm_original;
  trace.a_sorted = trace.perm.inverse[arm_original];
  trace.realized_loss = loss;
  trace.estimate = loss_estimator(trace.p, trace.a_sorted, loss);
  const double value = trace.estimate[trace.a_sorted];

  trace.real_advice_at_played.resize(trace.advices.size());
  for (std::size_t e = 0; e < trace.advices.size(); ++e) {
    trace.real_advice_at_played[e] = trace.advices[e][arm_original];
    state_.expert_loss[e] += trace.real_advice_at_played[e] * value;
  }
  trace.aux_advice_at_played = truncated_at_arm(trace.q, trace.k, thresholds_, trace.a_sorted);
  for (std::size_t j = 0; j < thresholds_.size(); ++j) {
    state_.threshold_loss[j] += trace.aux_advice_at_played[j] * value;
  }
  trace.played = true;
  ++rounds_;
}

}  // namespace myga
