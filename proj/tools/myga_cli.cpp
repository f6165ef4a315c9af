// Command-line harness: run policies against seeded environments, write
// per-round and summary CSVs, and record replay files.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "myga/environment.hpp"
#include "myga/harness.hpp"

namespace {

// Flag name -> config key. Every flag is a plain string routed through
// apply_setting so the config file and the command line share one parser.
const std::vector<std::pair<std::string, std::string>> kRunFlags = {
    {"--policy", "policy"},     {"--env", "env"},
    {"--arms", "arms"},         {"--experts", "experts"},
    {"--horizon", "horizon"},   {"--seed", "seed"},
    {"--eta", "eta"},           {"--gamma", "gamma"},
    {"--grid-denominator", "grid_denominator"},
    {"--lstar", "lstar"},       {"--out", "out"},
    {"--summary", "summary"},   {"--best-mean", "best_mean"},
    {"--gap", "gap"},           {"--replay", "replay"},
    {"--bound-constant", "bound_constant"},
    {"--threads", "threads"},   {"--fault", "fault"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MYGA contextual bandit experiments"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run a policy against an environment over seeds");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "key=value config file (flags override it)")
      ->check(CLI::ExistingFile);
  std::vector<std::string> values(kRunFlags.size());
  std::vector<CLI::Option*> options;
  for (std::size_t i = 0; i < kRunFlags.size(); ++i) {
    options.push_back(run_cmd->add_option(kRunFlags[i].first, values[i]));
  }
  options.back()->group("");  // --fault is a test hook
  bool audit = false;
  auto* audit_flag = run_cmd->add_flag("--audit", audit, "check lemma inequalities every round");

  auto* record_cmd = app.add_subcommand("record", "write a synthetic environment to a replay file");
  std::string env_name = "stochastic_gap";
  myga::EnvSpec spec;
  std::string replay_out;
  record_cmd->add_option("--env", env_name)->required();
  record_cmd->add_option("--arms", spec.arms);
  record_cmd->add_option("--experts", spec.num_experts);
  record_cmd->add_option("--horizon", spec.horizon);
  record_cmd->add_option("--seed", spec.seed);
  record_cmd->add_option("--best-mean", spec.best_mean);
  record_cmd->add_option("--gap", spec.gap);
  record_cmd->add_option("--out", replay_out)->required();

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    myga::ExperimentConfig config;
    try {
      if (!config_path.empty()) myga::apply_config_file(config, config_path);
      for (std::size_t i = 0; i < kRunFlags.size(); ++i) {
        if (options[i]->count() > 0) myga::apply_setting(config, kRunFlags[i].second, values[i]);
      }
      if (audit_flag->count() > 0) config.audit = audit;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
    return myga::run(config, std::cerr);
  }

  try {
    auto kind = myga::parse_env_kind(env_name);
    if (!kind || *kind == myga::EnvKind::replay) {
      std::cerr << "error: record needs a synthetic environment\n";
      return 1;
    }
    spec.kind = *kind;
    myga::save_replay(replay_out, myga::record_replay(spec));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
