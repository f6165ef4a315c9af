#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "myga/policy.hpp"
#include "myga/simplex.hpp"

namespace myga {

inline constexpr double kAuditTolerance = 1e-9;

struct Violation {
  std::string check;  // e.g. "lemma6.majority_floor"
  std::size_t arm = 0;  // sorted coordinates
  double margin = 0.0;  // negative: how far the inequality is broken
};

/// Per-round inequalities that hold whenever q solves the fixed-point
/// equation:
///  - auxiliary advice on majority arms stays proportional to zeta
///    (checked for every threshold),
///  - q <= zeta on minority arms, q >= zeta >= 1/(2K) on majority arms, and
///    the majority mass of q is at least 1/2,
///  - (1 - 2 K gamma) p <= q everywhere and p >= q wherever p > 0.
std::vector<Violation> check_round(const RoundTrace& trace, std::span<const double> thresholds,
                                   double gamma, double tol = kAuditTolerance);

/// Per-round majority loss bound: sum_{i<=k} lbar(i) <= 2K <p, l>.
/// `losses` are in original coordinates.
std::vector<Violation> check_majority_round(const RoundTrace& trace, std::span<const double> losses,
                                            double tol = kAuditTolerance);

struct RegretReport {
  std::size_t rounds = 0;
  double player_loss = 0.0;            // L_T = sum_t <p_t, l_t>
  double realized_loss = 0.0;          // sum_t l_t(a_t), informational
  std::vector<double> expert_loss;     // sum_t <xi_t^e, l_t>
  double majority_loss = 0.0;          // M
  double minority_loss = 0.0;          // m

  double best_expert_loss() const;     // L*
  double regret() const;               // R_T = L_T - L*
};

/// Adds round t. `p_sorted`, `perm` and `k` describe the played distribution
/// and majority split; `losses` are the true losses in original coordinates.
void accumulate(RegretReport& report, std::span<const double> p_sorted, const ArmPermutation& perm,
                std::size_t k, const AdviceSet& advices, std::span<const double> losses,
                double realized_loss);
void accumulate(RegretReport& report, const RoundTrace& trace, std::span<const double> losses);

struct BoundCheck {
  bool pass;
  double margin;  // bound - value; negative when violated
};

/// M <= 2 K L_T (+ tol).
BoundCheck check_majority_bound(const RegretReport& report, std::size_t arms,
                                double tol = kAuditTolerance);

/// sqrt(K ln(N T) L*) + K ln(N T)
double theorem_bound(std::size_t arms, std::size_t num_experts, std::size_t horizon, double lstar);

/// R_T <= c * theorem_bound(...)
BoundCheck evaluate_theorem_bound(const RegretReport& report, std::size_t arms,
                                  std::size_t num_experts, std::size_t horizon,
                                  double lstar_bound, double c);

}  // namespace myga
