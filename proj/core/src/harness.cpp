#include "myga/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "myga/baselines.hpp"
#include "myga/numeric_text.hpp"

namespace myga {

namespace {

constexpr std::string_view kPolicyNames[] = {"myga", "exp4", "exp4_threshold"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view value) {
  Int out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
    throw std::invalid_argument("config: " + std::string(key) + " expects an integer, got '" +
                                std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  auto v = parse_number(value);
  if (!v) {
    throw std::invalid_argument("config: " + std::string(key) + " expects a number, got '" +
                                std::string(value) + "'");
  }
  return *v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw std::invalid_argument("config: " + std::string(key) + " expects a boolean");
}

std::vector<std::uint64_t> parse_seed_list(std::string_view value) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const auto piece = trim(value.substr(pos, comma == std::string_view::npos ? value.npos : comma - pos));
    seeds.push_back(parse_integer<std::uint64_t>("seed", piece));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return seeds;
}

std::mt19937_64 play_stream(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x706c6179u};
  return std::mt19937_64(seq);
}

struct RowWriter {
  std::string& out;

  RowWriter& field(double x) {
    append_number(out, x);
    out.push_back(',');
    return *this;
  }
  RowWriter& field(std::uint64_t x) {
    out += std::to_string(x);
    out.push_back(',');
    return *this;
  }
  void end() { out.back() = '\n'; }
};

SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed) {
  EnvSpec env_spec = config.env;
  env_spec.seed = seed;
  const Environment env(env_spec);
  const std::size_t arms = env.arms();
  const std::size_t experts = env.num_experts();
  const std::size_t horizon = env.horizon();

  ExperimentConfig resolved = config;
  resolved.env = env.spec();
  const double lstar = resolved.effective_lstar_bound();
  const std::int64_t den =
      config.grid_denominator.value_or(2 * static_cast<std::int64_t>(horizon));
  const Schedule schedule = schedule_parameters(arms, experts, horizon, lstar, den);

  SeedResult result;
  result.seed = seed;
  result.eta = config.eta.value_or(schedule.eta);
  if (config.gamma) {
    result.gamma = *config.gamma;
  } else {
    result.gamma = config.eta ? round_up_to_grid(2.0 * result.eta, den) : schedule.gamma;
  }

  std::optional<MygaPolicy> myga;
  std::optional<Exp4Policy> exp4;
  if (config.policy == PolicyKind::myga) {
    myga.emplace(MygaConfig{arms, experts, horizon, result.eta, result.gamma, den});
    myga->inject_fault(config.fault);
    result.num_thresholds = myga->thresholds().size();
  } else {
    exp4.emplace(arms, experts, result.eta,
                 config.policy == PolicyKind::exp4 ? Exp4Variant::plain : Exp4Variant::thresholded,
                 result.gamma);
  }

  auto rng = play_stream(seed);
  RegretReport& report = result.report;
  RowWriter row{result.round_rows};
  for (std::size_t t = 1; t <= horizon; ++t) {
    const RoundData data = env.round(t);
    const double u = std::generate_canonical<double, 53>(rng);
    std::size_t arm = 0;
    std::size_t k = 0;
    double residual = 0.0;
    std::size_t violations = 0;
    double expected = 0.0;

    if (myga) {
      RoundTrace trace = myga->advise(data.advices);
      arm = sample_arm(trace.p_original, u);
      myga->update(trace, arm, data.losses[arm]);
      accumulate(report, trace, data.losses);
      if (config.audit) {
        violations += check_round(trace, myga->thresholds(), result.gamma).size();
        violations += check_majority_round(trace, data.losses).size();
      }
      k = trace.k;
      residual = trace.residual;
      result.max_residual = std::max(result.max_residual, residual);
      result.max_solver_iterations = std::max(result.max_solver_iterations, trace.solver_iterations);
      for (std::size_t i = 0; i < arms; ++i) expected += trace.p_original[i] * data.losses[i];
    } else {
      const Distribution mix = exp4->mixture(data.advices);
      const Distribution p = exp4->advise(data.advices);
      const SortedDistribution sorted = descending_sort(mix);
      k = pivot_index(sorted.values);
      arm = sample_arm(p, u);
      exp4->update(data.advices, p, arm, data.losses[arm]);
      accumulate(report, sorted.perm.to_sorted(p), sorted.perm, k, data.advices, data.losses,
                 data.losses[arm]);
      for (std::size_t i = 0; i < arms; ++i) expected += p[i] * data.losses[i];
    }
    result.violations += violations;

    row.field(seed)
        .field(std::uint64_t{t})
        .field(std::uint64_t{k})
        .field(std::uint64_t{arm + 1})
        .field(data.losses[arm])
        .field(expected)
        .field(report.player_loss)
        .field(report.best_expert_loss())
        .field(report.regret())
        .field(report.majority_loss)
        .field(report.minority_loss)
        .field(residual)
        .field(std::uint64_t{violations})
        .end();
  }

  if (myga && config.audit && horizon > 0 && !check_majority_bound(report, arms).pass) {
    ++result.violations;
  }
  result.bound_value = theorem_bound(arms, experts, horizon, lstar);
  result.bound_pass = report.regret() <= config.bound_constant * result.bound_value;
  return result;
}

}  // namespace

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kPolicyNames); ++i) {
    if (kPolicyNames[i] == name) return static_cast<PolicyKind>(i);
  }
  return std::nullopt;
}

std::string_view policy_kind_name(PolicyKind kind) {
  return kPolicyNames[static_cast<std::size_t>(kind)];
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw std::invalid_argument("config: at least one seed is required");
  env.validate();
  if (eta && !(*eta > 0.0)) throw std::invalid_argument("config: eta must be positive");
  if (gamma && !(*gamma > 0.0 && *gamma <= 0.5)) {
    throw std::invalid_argument("config: gamma outside (0, 1/2]");
  }
  if (grid_denominator && *grid_denominator < 2) {
    throw std::invalid_argument("config: grid_denominator must be at least 2");
  }
  if (lstar_bound && !(*lstar_bound >= 0.0)) throw std::invalid_argument("config: lstar must be >= 0");
  if (!(bound_constant > 0.0)) throw std::invalid_argument("config: bound_constant must be positive");
}

double ExperimentConfig::effective_lstar_bound() const {
  if (lstar_bound) return *lstar_bound;
  const double horizon = static_cast<double>(env.horizon);
  switch (env.kind) {
    case EnvKind::zero_loss_expert: return 0.0;
    case EnvKind::stochastic_gap: return env.best_mean * horizon;
    default: return horizon;
  }
}

std::filesystem::path ExperimentConfig::effective_summary_path() const {
  if (!summary_path.empty() || output_path.empty()) return summary_path;
  auto path = output_path;
  path.replace_filename(output_path.stem().string() + "_summary.csv");
  return path;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "policy") {
    auto kind = parse_policy_kind(value);
    if (!kind) throw std::invalid_argument("config: unknown policy '" + std::string(value) + "'");
    config.policy = *kind;
  } else if (key == "env") {
    auto kind = parse_env_kind(value);
    if (!kind) throw std::invalid_argument("config: unknown env '" + std::string(value) + "'");
    config.env.kind = *kind;
  } else if (key == "arms") {
    config.env.arms = parse_integer<std::size_t>(key, value);
  } else if (key == "experts") {
    config.env.num_experts = parse_integer<std::size_t>(key, value);
  } else if (key == "horizon") {
    config.env.horizon = parse_integer<std::size_t>(key, value);
  } else if (key == "seed" || key == "seeds") {
    config.seeds = parse_seed_list(value);
  } else if (key == "eta") {
    config.eta = parse_real(key, value);
  } else if (key == "gamma") {
    config.gamma = parse_real(key, value);
  } else if (key == "grid_denominator") {
    config.grid_denominator = parse_integer<std::int64_t>(key, value);
  } else if (key == "lstar") {
    config.lstar_bound = parse_real(key, value);
  } else if (key == "audit") {
    config.audit = parse_bool(key, value);
  } else if (key == "out") {
    config.output_path = std::string(value);
  } else if (key == "summary") {
    config.summary_path = std::string(value);
  } else if (key == "best_mean") {
    config.env.best_mean = parse_real(key, value);
  } else if (key == "gap") {
    config.env.gap = parse_real(key, value);
  } else if (key == "replay") {
    config.env.replay_path = std::string(value);
  } else if (key == "bound_constant") {
    config.bound_constant = parse_real(key, value);
  } else if (key == "threads") {
    config.threads = parse_integer<std::size_t>(key, value);
  } else if (key == "fault") {
    if (value == "none") {
      config.fault = Fault::none;
    } else if (value == "depress_majority") {
      config.fault = Fault::depress_majority;
    } else {
      throw std::invalid_argument("config: unknown fault '" + std::string(value) + "'");
    }
  } else {
    throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
  }
}

void apply_config_text(ExperimentConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    try {
      apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(config, buf.str());
}

std::size_t RunResult::total_violations() const {
  std::size_t total = 0;
  for (const auto& s : seeds) total += s.violations;
  return total;
}

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::uint64_t> seeds = config.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  RunResult result;
  result.seeds.resize(seeds.size());
  std::size_t workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, seeds.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        result.seeds[i] = run_seed(config, seeds[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

void write_round_csv(std::ostream& out, const RunResult& result) {
  out << kRoundCsvHeader << '\n';
  for (const auto& s : result.seeds) out << s.round_rows;
}

void write_summary_csv(std::ostream& out, const RunResult& result) {
  out << kSummaryCsvHeader << '\n';
  for (const auto& s : result.seeds) {
    std::string row = std::to_string(s.seed);
    for (double x : {s.report.regret(), s.report.best_expert_loss(), s.report.majority_loss,
                     s.report.minority_loss, s.bound_value}) {
      row.push_back(',');
      append_number(row, x);
    }
    row += s.bound_pass ? ",1\n" : ",0\n";
    out << row;
  }
}

void emit_csv(const RunResult& result, const std::filesystem::path& rounds_path,
              const std::filesystem::path& summary_path) {
  auto write = [](const std::filesystem::path& path, auto&& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
  };
  if (!rounds_path.empty()) write(rounds_path, [&](std::ostream& o) { write_round_csv(o, result); });
  if (!summary_path.empty()) write(summary_path, [&](std::ostream& o) { write_summary_csv(o, result); });
}

int run(const ExperimentConfig& config, std::ostream& log) {
  try {
    const RunResult result = run_experiment(config);
    emit_csv(result, config.output_path, config.effective_summary_path());
    for (const auto& s : result.seeds) {
      log << policy_kind_name(config.policy) << " seed=" << s.seed << " eta=" << s.eta
          << " gamma=" << s.gamma << " |S|=" << s.num_thresholds << " R_T=" << s.report.regret()
          << " L*=" << s.report.best_expert_loss() << " violations=" << s.violations << '\n';
    }
    if (config.audit && result.total_violations() > 0) {
      log << "audit: " << result.total_violations() << " violation(s)\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace myga
