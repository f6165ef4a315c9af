#include "myga/environment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "myga/numeric_text.hpp"

namespace myga {

namespace {

constexpr std::string_view kKindNames[] = {"zero_loss_expert", "stochastic_gap",
                                           "adversarial_minority", "replay"};

// Independent stream per (seed, t); t = 0 is reserved for per-seed setup.
std::mt19937_64 stream_for(std::uint64_t seed, std::size_t t) {
  const auto t64 = static_cast<std::uint64_t>(t);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t64), static_cast<std::uint32_t>(t64 >> 32),
                    0x6d796761u};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) {
  return std::generate_canonical<double, 53>(rng);
}

Distribution point_mass(std::size_t arms, std::size_t arm) {
  Distribution d(arms, 0.0);
  d[arm] = 1.0;
  return d;
}

Distribution random_advice(std::size_t arms, std::mt19937_64& rng) {
  // Flat Dirichlet via normalized exponentials.
  Distribution d(arms);
  for (double& x : d) x = -std::log1p(-uniform01(rng));
  const double total = std::accumulate(d.begin(), d.end(), 0.0);
  for (double& x : d) x /= total;
  return d;
}

RoundData zero_loss_round(const EnvSpec& spec, std::mt19937_64& rng) {
  RoundData rd;
  const std::size_t good = std::uniform_int_distribution<std::size_t>(0, spec.arms - 1)(rng);
  rd.losses.resize(spec.arms);
  for (std::size_t i = 0; i < spec.arms; ++i) rd.losses[i] = i == good ? 0.0 : uniform01(rng);
  rd.advices.push_back(point_mass(spec.arms, good));
  for (std::size_t e = 1; e < spec.num_experts; ++e) rd.advices.push_back(random_advice(spec.arms, rng));
  return rd;
}

RoundData stochastic_gap_round(const EnvSpec& spec, std::mt19937_64& rng) {
  // Rank order of arms is fixed per seed.
  auto setup = stream_for(spec.seed, 0);
  std::vector<std::size_t> order(spec.arms);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), setup);

  RoundData rd;
  rd.losses.resize(spec.arms);
  for (std::size_t rank = 0; rank < spec.arms; ++rank) {
    const double mean = std::min(1.0, spec.best_mean + static_cast<double>(rank) * spec.gap);
    rd.losses[order[rank]] = uniform01(rng) < mean ? 1.0 : 0.0;
  }
  for (std::size_t e = 0; e < spec.num_experts; ++e) {
    rd.advices.push_back(point_mass(spec.arms, e % spec.arms));
  }
  return rd;
}

RoundData adversarial_minority_round(const EnvSpec& spec, std::size_t t, std::mt19937_64& rng) {
  const std::size_t minority = spec.arms - 1;
  RoundData rd;
  rd.advices.push_back(point_mass(spec.arms, 0));
  // Level sweeps 1/2, 1/4, ..., 1/256 and repeats.
  const double level = std::ldexp(0.5, -static_cast<int>(t % 8));
  for (std::size_t e = 1; e < spec.num_experts; ++e) {
    const double jitter = 0.5 + uniform01(rng);
    const double on_minority = std::min(0.5, level * jitter * static_cast<double>(e) /
                                                 static_cast<double>(spec.num_experts));
    Distribution d(spec.arms, (1.0 - on_minority) / static_cast<double>(spec.arms - 1));
    d[minority] = on_minority;
    rd.advices.push_back(std::move(d));
  }
  rd.losses.resize(spec.arms);
  const bool favour_minority = t % 2 == 1;
  for (std::size_t i = 0; i < spec.arms; ++i) {
    const double u = uniform01(rng);
    if (i == minority) {
      rd.losses[i] = favour_minority ? 0.0 : 0.5 + 0.5 * u;
    } else {
      rd.losses[i] = favour_minority ? 0.5 + 0.5 * u : 0.25 * u;
    }
  }
  return rd;
}

}  // namespace

std::optional<EnvKind> parse_env_kind(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kKindNames); ++i) {
    if (kKindNames[i] == name) return static_cast<EnvKind>(i);
  }
  return std::nullopt;
}

std::string_view env_kind_name(EnvKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

void EnvSpec::validate() const {
  if (kind == EnvKind::replay) {
    if (replay_path.empty()) throw std::invalid_argument("env: replay needs a file path");
    return;
  }
  if (arms < 2) throw std::invalid_argument("env: need at least 2 arms");
  if (num_experts < 1) throw std::invalid_argument("env: need at least 1 expert");
  if (horizon < 1) throw std::invalid_argument("env: horizon must be positive");
  if (!(best_mean >= 0.0 && best_mean <= 1.0)) throw std::invalid_argument("env: best mean outside [0, 1]");
  if (!(gap > 0.0 && gap <= 1.0)) throw std::invalid_argument("env: gap outside (0, 1]");
}

RoundData generate(const EnvSpec& spec, std::size_t t) {
  if (t < 1 || t > spec.horizon) {
    throw std::out_of_range("env: round " + std::to_string(t) + " outside [1, " +
                            std::to_string(spec.horizon) + "]");
  }
  auto rng = stream_for(spec.seed, t);
  switch (spec.kind) {
    case EnvKind::zero_loss_expert: return zero_loss_round(spec, rng);
    case EnvKind::stochastic_gap: return stochastic_gap_round(spec, rng);
    case EnvKind::adversarial_minority: return adversarial_minority_round(spec, t, rng);
    case EnvKind::replay: break;
  }
  throw std::invalid_argument("env: replay rounds come from a file, not a generator");
}

ReplayError::ReplayError(std::size_t line, const std::string& message)
    : std::runtime_error("replay line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

void write_row(std::ostream& out, std::span<const double> values) {
  std::string row;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) row.push_back(' ');
    append_number(row, values[i]);
  }
  row.push_back('\n');
  out << row;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t next = line.find(' ', pos);
    const std::size_t end = next == std::string_view::npos ? line.size() : next;
    tokens.push_back(line.substr(pos, end - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return tokens;
}

std::vector<double> parse_row(std::string_view line, std::size_t expected, std::size_t line_no) {
  const auto tokens = split_spaces(line);
  if (tokens.size() != expected) {
    throw ReplayError(line_no, "expected " + std::to_string(expected) + " values, found " +
                                   std::to_string(tokens.size()));
  }
  std::vector<double> values(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    auto v = parse_number(tokens[i]);
    if (!v) throw ReplayError(line_no, "cannot parse '" + std::string(tokens[i]) + "'");
    values[i] = *v;
  }
  return values;
}

std::size_t parse_count(std::string_view token, std::size_t line_no) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw ReplayError(line_no, "bad header field '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

void write_replay(std::ostream& out, const Replay& replay) {
  out << replay.arms << ' ' << replay.num_experts << ' ' << replay.rounds.size() << '\n';
  for (const auto& rd : replay.rounds) {
    write_row(out, rd.losses);
    for (const auto& advice : rd.advices) write_row(out, advice);
  }
}

Replay read_replay(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };

  if (!next_line()) throw ReplayError(1, "missing header");
  const auto header = split_spaces(line);
  if (header.size() != 3) throw ReplayError(1, "header must be 'K num_experts T'");
  Replay replay;
  replay.arms = parse_count(header[0], 1);
  replay.num_experts = parse_count(header[1], 1);
  const std::size_t horizon = parse_count(header[2], 1);
  if (replay.arms < 2 || replay.num_experts < 1) throw ReplayError(1, "bad dimensions");

  replay.rounds.reserve(horizon);
  for (std::size_t t = 1; t <= horizon; ++t) {
    RoundData rd;
    if (!next_line()) {
      throw ReplayError(line_no + 1, "round " + std::to_string(t) + " is incomplete");
    }
    rd.losses = parse_row(line, replay.arms, line_no);
    for (double x : rd.losses) {
      if (!(x >= 0.0 && x <= 1.0)) throw ReplayError(line_no, "loss outside [0, 1]");
    }
    for (std::size_t e = 0; e < replay.num_experts; ++e) {
      if (!next_line()) {
        throw ReplayError(line_no + 1, "round " + std::to_string(t) + " is incomplete");
      }
      auto advice = parse_row(line, replay.arms, line_no);
      if (!is_distribution(advice)) throw ReplayError(line_no, "advice is not on the simplex");
      rd.advices.push_back(std::move(advice));
    }
    replay.rounds.push_back(std::move(rd));
  }
  if (next_line() && !line.empty()) throw ReplayError(line_no, "trailing content after last round");
  return replay;
}

void save_replay(const std::filesystem::path& path, const Replay& replay) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_replay(out, replay);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Replay load_replay(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_replay(in);
}

Replay record_replay(const EnvSpec& spec) {
  spec.validate();
  Replay replay{spec.arms, spec.num_experts, {}};
  replay.rounds.reserve(spec.horizon);
  for (std::size_t t = 1; t <= spec.horizon; ++t) replay.rounds.push_back(generate(spec, t));
  return replay;
}

Environment::Environment(EnvSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (spec_.kind != EnvKind::replay) return;
  // Dimensions and horizon always come from the file.
  Replay replay = load_replay(spec_.replay_path);
  spec_.arms = replay.arms;
  spec_.num_experts = replay.num_experts;
  spec_.horizon = replay.rounds.size();
  replay_ = std::move(replay.rounds);
}

RoundData Environment::round(std::size_t t) const {
  if (spec_.kind != EnvKind::replay) return generate(spec_, t);
  if (t < 1 || t > replay_.size()) throw std::out_of_range("env: replay round out of range");
  return replay_[t - 1];
}

}  // namespace myga
