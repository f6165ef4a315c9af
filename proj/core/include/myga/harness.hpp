#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "myga/audit.hpp"
#include "myga/environment.hpp"
#include "myga/policy.hpp"

namespace myga {

enum class PolicyKind { myga, exp4, exp4_threshold };

std::optional<PolicyKind> parse_policy_kind(std::string_view name);
std::string_view policy_kind_name(PolicyKind kind);

struct ExperimentConfig {
  PolicyKind policy = PolicyKind::myga;
  EnvSpec env;
  std::optional<double> eta;
  std::optional<double> gamma;
  std::optional<std::int64_t> grid_denominator;
  /// Known bound on the best expert's loss; feeds the learning-rate schedule
  /// and the regret bound. Defaults to the environment's nominal value.
  std::optional<double> lstar_bound;
  std::vector<std::uint64_t> seeds{1};
  bool audit = false;
  std::filesystem::path output_path;   // per-round CSV; empty disables
  std::filesystem::path summary_path;  // defaults to <output stem>_summary.csv
  double bound_constant = 10.0;
  std::size_t threads = 0;  // 0: one per hardware thread
  Fault fault = Fault::none;

  void validate() const;
  /// Nominal L*: 0 for zero_loss_expert, best_mean * T for stochastic_gap,
  /// T otherwise.
  double effective_lstar_bound() const;
  std::filesystem::path effective_summary_path() const;
};

/// Sets one `key=value` setting. Keys: policy, env, arms, experts, horizon,
/// seed / seeds (comma separated), eta, gamma, grid_denominator, lstar, audit,
/// out, summary, best_mean, gap, replay, bound_constant, threads, fault.
/// Throws std::invalid_argument on unknown keys or bad values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Flat `key=value` lines; '#' starts a comment, blank lines are ignored.
void apply_config_text(ExperimentConfig& config, std::string_view text);
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

struct SeedResult {
  std::uint64_t seed = 0;
  double eta = 0.0;
  double gamma = 0.0;
  std::size_t num_thresholds = 0;
  RegretReport report;
  std::size_t violations = 0;
  double max_residual = 0.0;
  std::size_t max_solver_iterations = 0;
  double bound_value = 0.0;  // sqrt(K ln(NT) L*) + K ln(NT)
  bool bound_pass = false;   // R_T <= bound_constant * bound_value
  std::string round_rows;    // per-round CSV body, no header
};

struct RunResult {
  std::vector<SeedResult> seeds;
  std::size_t total_violations() const;
};

inline constexpr std::string_view kRoundCsvHeader =
    "seed,t,k_t,a,realized_loss,expected_loss,cum_LT,cum_Lstar,cum_regret,cum_M,cum_m,residual,"
    "violations";
inline constexpr std::string_view kSummaryCsvHeader = "seed,R_T,L_star,M,m,bound_value,bound_pass";

/// Runs every seed (in parallel when threads != 1); results come back in the
/// order of config.seeds.
RunResult run_experiment(const ExperimentConfig& config);

void write_round_csv(std::ostream& out, const RunResult& result);
void write_summary_csv(std::ostream& out, const RunResult& result);
void emit_csv(const RunResult& result, const std::filesystem::path& rounds_path,
              const std::filesystem::path& summary_path);

/// Full CLI run: experiment, CSV output, log lines. Exit code 0 on success,
/// 2 when auditing found violations, 1 on errors.
int run(const ExperimentConfig& config, std::ostream& log);

}  // namespace myga
