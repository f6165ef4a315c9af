#include "myga/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace myga {

namespace {

void require_ge(std::vector<Violation>& out, const char* check, std::size_t arm, double lhs,
                double rhs, double tol) {
  const double margin = lhs - rhs;
  if (margin < -tol) out.push_back({check, arm, margin});
}

}  // namespace

std::vector<Violation> check_round(const RoundTrace& trace, std::span<const double> thresholds,
                                   double gamma, double tol) {
  std::vector<Violation> out;
  const std::size_t arms = trace.q.size();
  const std::size_t k = trace.k;
  const auto& zeta = trace.zeta_sorted;
  const auto& q = trace.q;
  const auto& p = trace.p;
  if (zeta.size() != arms || p.size() != arms || k < 1 || k > arms) {
    throw std::invalid_argument("check_round: incomplete trace");
  }
  const double karms = static_cast<double>(arms);

  // Majority floor, domination and minority ceiling.
  for (std::size_t i = 0; i < arms; ++i) {
    if (i < k) {
      require_ge(out, "lemma6.majority_dominates", i, q[i], zeta[i], tol);
      require_ge(out, "lemma6.majority_floor", i, zeta[i], 1.0 / (2.0 * karms), tol);
      require_ge(out, "lemma6.majority_floor", i, q[i], 1.0 / (2.0 * karms), tol);
    } else {
      require_ge(out, "lemma6.minority_ceiling", i, zeta[i], q[i], tol);
    }
  }
  const double q_majority = std::accumulate(q.begin(), q.begin() + k, 0.0);
  require_ge(out, "lemma6.majority_mass", 0, q_majority, 0.5, tol);

  // p against q.
  for (std::size_t i = 0; i < arms; ++i) {
    require_ge(out, "lemma7.scaled_below_q", i, q[i], (1.0 - 2.0 * karms * gamma) * p[i], tol);
    if (p[i] != 0.0) require_ge(out, "lemma7.support_above_q", i, p[i], q[i], tol);
  }

  // Every auxiliary advice T_s q keeps the majority arms proportional to zeta:
  // xi^s(i) * Z = zeta(i) * (1 - sum_{j>k} xi^s(j)).
  if (k < arms && !thresholds.empty()) {
    const double zeta_majority = std::accumulate(zeta.begin(), zeta.begin() + k, 0.0);
    const double q_minority = std::accumulate(q.begin() + k, q.end(), 0.0);
    std::vector<double> minority(q.begin() + k, q.end());
    std::sort(minority.begin(), minority.end());
    std::size_t next = 0;
    double dropped = 0.0;
    for (double s : thresholds) {
      while (next < minority.size() && minority[next] <= s) dropped += minority[next++];
      const double scale = 1.0 + dropped / q_majority;
      const double aux_minority = q_minority - dropped;
      for (std::size_t i = 0; i < k; ++i) {
        const double lhs = q[i] * scale * zeta_majority;
        const double rhs = zeta[i] * (1.0 - aux_minority);
        const double gap = std::abs(lhs - rhs);
        if (gap > tol) out.push_back({"lemma5.majority_proportional", i, -gap});
      }
    }
  }
  return out;
}

std::vector<Violation> check_majority_round(const RoundTrace& trace, std::span<const double> losses,
                                            double tol) {
  const std::size_t arms = trace.p.size();
  if (losses.size() != arms) throw std::invalid_argument("check_majority_round: dimension mismatch");
  double majority = 0.0;
  double expected = 0.0;
  for (std::size_t j = 0; j < arms; ++j) {
    const double loss = losses[trace.perm.forward[j]];
    expected += trace.p[j] * loss;
    if (j < trace.k && trace.p[j] > 0.0) majority += loss;
  }
  std::vector<Violation> out;
  require_ge(out, "lemma10.round_majority", 0, 2.0 * static_cast<double>(arms) * expected,
             majority, tol);
  return out;
}

double RegretReport::best_expert_loss() const {
  if (expert_loss.empty()) return 0.0;
  return *std::min_element(expert_loss.begin(), expert_loss.end());
}

double RegretReport::regret() const { return player_loss - best_expert_loss(); }

void accumulate(RegretReport& report, std::span<const double> p_sorted, const ArmPermutation& perm,
                std::size_t k, const AdviceSet& advices, std::span<const double> losses,
                double realized_loss) {
  const std::size_t arms = losses.size();
  if (p_sorted.size() != arms || perm.size() != arms || k > arms) {
    throw std::invalid_argument("accumulate: dimension mismatch");
  }
  if (report.expert_loss.empty()) report.expert_loss.assign(advices.size(), 0.0);
  if (report.expert_loss.size() != advices.size()) {
    throw std::invalid_argument("accumulate: expert count changed");
  }
  for (std::size_t j = 0; j < arms; ++j) {
    const double loss = losses[perm.forward[j]];
    report.player_loss += p_sorted[j] * loss;
    if (p_sorted[j] > 0.0) (j < k ? report.majority_loss : report.minority_loss) += loss;
  }
  for (std::size_t e = 0; e < advices.size(); ++e) {
    if (advices[e].size() != arms) throw std::invalid_argument("accumulate: advice dimension mismatch");
    double value = 0.0;
    for (std::size_t i = 0; i < arms; ++i) value += advices[e][i] * losses[i];
    report.expert_loss[e] += value;
  }
  report.realized_loss += realized_loss;
  ++report.rounds;
}

void accumulate(RegretReport& report, const RoundTrace& trace, std::span<const double> losses) {
  accumulate(report, trace.p, trace.perm, trace.k, trace.advices, losses, trace.realized_loss);
}

BoundCheck check_majority_bound(const RegretReport& report, std::size_t arms, double tol) {
  const double margin = 2.0 * static_cast<double>(arms) * report.player_loss - report.majority_loss;
  return {margin >= -tol, margin};
}

double theorem_bound(std::size_t arms, std::size_t num_experts, std::size_t horizon, double lstar) {
  const double k = static_cast<double>(arms);
  const double log_term = std::log(static_cast<double>(num_experts) * static_cast<double>(horizon));
  return std::sqrt(k * log_term * std::max(lstar, 0.0)) + k * log_term;
}

BoundCheck evaluate_theorem_bound(const RegretReport& report, std::size_t arms,
                                  std::size_t num_experts, std::size_t horizon,
                                  double lstar_bound, double c) {
  const double margin = c * theorem_bound(arms, num_experts, horizon, lstar_bound) - report.regret();
  return {margin >= 0.0, margin};
}

}  // namespace myga
