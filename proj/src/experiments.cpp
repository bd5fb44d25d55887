// Copyright 2026 The schemagrain Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "schemagrain/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>
#include <utility>

#include "schemagrain/errors.hpp"
#include "schemagrain/sga_operators.hpp"

namespace schemagrain {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw UsageError("invalid integer for '" + std::string(key) + "': '" + std::string(text) + "'");
  return value;
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() ||
      !std::isfinite(value))
    throw UsageError("invalid number for '" + std::string(key) + "': '" + std::string(text) + "'");
  return value;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_double(key, text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw UsageError("invalid boolean for '" + std::string(key) + "': '" + std::string(text) + "'");
}

std::string join(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + file.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& file) {
  out.flush();
  if (!out) throw IoError("failed writing '" + file.string() + "'");
}

void write_table(const std::filesystem::path& file, unsigned order,
                 const std::vector<std::vector<double>>& rows) {
  auto out = open_output(file);
  out << "generation,genome_bits,value\n";
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t g = 0; g < rows[t].size(); ++g)
      out << t << ',' << to_bits(g, order) << ',' << format_double(rows[t][g]) << '\n';
  finish(out, file);
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

void ExperimentConfig::validate() const {
  if (order < 1 || order > kMaxGenomeLength)
    throw UsageError("o must be in 1.." + std::to_string(kMaxGenomeLength));
  if (population < 1) throw UsageError("n must be at least 1");
  if (replicates < 1) throw UsageError("r must be at least 1");
  if (!(sigma >= 0.0)) throw UsageError("sigma must be nonnegative");
  if (!(f_lo <= f_hi)) throw UsageError("frange must satisfy lo <= hi");
  if (!fvalues.empty() && fvalues.size() != (std::size_t{1} << order))
    throw UsageError("fvalues must list " + std::to_string(std::size_t{1} << order) +
                     " values for o=" + std::to_string(order));
  for (double f : fvalues)
    if (!(f >= 0.0)) throw UsageError("fvalues must be nonnegative");
}

ExperimentConfig preset(int id) {
  ExperimentConfig c;
  c.preset = id;
  c.sigma = 0.8;
  c.generations = 30;
  c.order = 3;
  switch (id) {
    case 1: c.population = 2000; c.replicates = 1; break;
    case 2: c.population = 2000; c.replicates = 40; break;
    case 3: c.population = 20000; c.replicates = 40; break;
    case 4: c.population = 100000; c.replicates = 40; break;
    case 5: c.population = 400000; c.replicates = 1; break;
    case 6: c.order = 4; c.population = 200000; c.replicates = 10; break;
    case 7: case 8: case 9: case 10: case 11: case 12:
      c.population = 1000;
      c.replicates = 10;
      c.generations = 300;
      c.rescue = true;
      break;
    default:
      throw UsageError("unknown preset " + std::to_string(id) + " (expected 1..12)");
  }
  return c;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  if (key == "preset") {
    ExperimentConfig fresh = preset(parse_integer<int>(key, value));
    fresh.output_dir = config.output_dir;
    fresh.threads = config.threads;
    config = std::move(fresh);
  } else if (key == "o") {
    config.order = parse_integer<unsigned>(key, value);
  } else if (key == "n") {
    config.population = parse_integer<std::size_t>(key, value);
  } else if (key == "r") {
    config.replicates = parse_integer<std::size_t>(key, value);
  } else if (key == "generations") {
    config.generations = parse_integer<std::size_t>(key, value);
  } else if (key == "sigma") {
    config.sigma = parse_double(key, value);
  } else if (key == "fvalues") {
    config.fvalues = parse_list(key, value);
  } else if (key == "frange") {
    const auto bounds = parse_list(key, value);
    if (bounds.size() != 2) throw UsageError("frange expects 'lo,hi'");
    config.f_lo = bounds[0];
    config.f_hi = bounds[1];
  } else if (key == "seed") {
    config.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "fvalue_seed") {
    config.fvalue_seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "rescue") {
    config.rescue = parse_bool(key, value);
  } else if (key == "out") {
    config.output_dir = std::string(trim(value));
  } else if (key == "tool_version") {
    // informational only
  } else {
    throw UsageError("unknown setting '" + std::string(key) + "'");
  }
}

void apply_config_text(ExperimentConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("line " + std::to_string(line_no) + ": expected 'key = value'");
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str());
}

std::string manifest_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "# schemagrain experiment manifest\n";
  out << "tool_version = " << kToolVersion << '\n';
  if (config.preset != 0) out << "preset = " << config.preset << '\n';
  out << "o = " << config.order << '\n';
  out << "n = " << config.population << '\n';
  out << "r = " << config.replicates << '\n';
  out << "generations = " << config.generations << '\n';
  out << "sigma = " << format_double(config.sigma) << '\n';
  if (!config.fvalues.empty()) {
    out << "fvalues = " << join(config.fvalues) << '\n';
  } else {
    out << "frange = " << format_double(config.f_lo) << ',' << format_double(config.f_hi) << '\n';
    out << "fvalue_seed = " << config.fvalue_seed.value_or(config.seed) << '\n';
  }
  out << "seed = " << config.seed << '\n';
  out << "rescue = " << (config.rescue ? "true" : "false") << '\n';
  return out.str();
}

std::vector<double> resolve_fvalues(const ExperimentConfig& config) {
  config.validate();
  if (!config.fvalues.empty()) return config.fvalues;
  const std::uint64_t seed = config.fvalue_seed.value_or(config.seed);
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(0xF7A1)};
  Rng rng(seq);
  std::uniform_real_distribution<double> draw(config.f_lo, config.f_hi);
  std::vector<double> out(std::size_t{1} << config.order);
  for (double& f : out) f = config.f_lo == config.f_hi ? config.f_lo : draw(rng);
  return out;
}

Trajectory ipsga2_trajectory(unsigned order, std::span<const double> fvalues,
                             std::size_t generations) {
  const BitstringSet genomes(order);
  EvolutionMachine machine(projected_uniform_crossover(order),
                           FitnessFunction(genomes.indexed_set(),
                                           std::vector<double>(fvalues.begin(), fvalues.end())));
  return trajectory(machine, Distribution::uniform(genomes.indexed_set()), generations);
}

double max_deviation(const RunStatistics& stats, const Trajectory& exact) {
  if (stats.mean.size() != exact.generations.size())
    throw DimensionError("max_deviation: generation counts differ");
  double worst = 0.0;
  for (std::size_t t = 0; t < stats.mean.size(); ++t) {
    const auto& p = exact.generations[t];
    if (stats.mean[t].size() != p.size()) throw DimensionError("max_deviation: genome sets differ");
    for (std::size_t g = 0; g < p.size(); ++g)
      worst = std::max(worst, std::abs(stats.mean[t][g] - p[g]));
  }
  return worst;
}

double ExperimentResult::max_deviation() const { return schemagrain::max_deviation(sfsga, ipsga2); }

ExperimentResult compute_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.fvalues = resolve_fvalues(config);
  result.ipsga2 = ipsga2_trajectory(config.order, result.fvalues, config.generations);
  const double lo = *std::min_element(result.fvalues.begin(), result.fvalues.end());
  const double hi = *std::max_element(result.fvalues.begin(), result.fvalues.end());
  const StochasticFitness fitness(result.fvalues, config.sigma, FValueRange{lo, hi});
  const auto runs = run_replicates(config.order, config.population, fitness, config.generations,
                                   config.seed, config.replicates, config.threads);
  result.sfsga = aggregate_runs(runs);
  if (config.rescue) result.rescue = rescue_check(result.sfsga, result.fvalues);
  return result;
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create '" + directory.string() + "': " + ec.message());
  const unsigned order = result.config.order;

  std::vector<std::vector<double>> exact;
  for (const auto& p : result.ipsga2.generations)
    exact.emplace_back(p.mass().begin(), p.mass().end());
  write_table(directory / "ipsga2.csv", order, exact);
  write_table(directory / "sfsga_mean.csv", order, result.sfsga.mean);
  write_table(directory / "sfsga_std.csv", order, result.sfsga.stddev);

  {
    const auto file = directory / "fvalues.csv";
    auto out = open_output(file);
    out << "genome_bits,value\n";
    for (std::size_t g = 0; g < result.fvalues.size(); ++g)
      out << to_bits(g, order) << ',' << format_double(result.fvalues[g]) << '\n';
    finish(out, file);
  }
  if (result.rescue) {
    const auto file = directory / "rescue_report.csv";
    auto out = open_output(file);
    const RescueReport& r = *result.rescue;
    out << "winner_bits,winner_fvalue,mean_fvalue,above_average,is_global_max,degenerate_tie\n";
    out << to_bits(r.winner, order) << ',' << format_double(r.winner_fvalue) << ','
        << format_double(r.mean_fvalue) << ',' << (r.above_average ? "true" : "false") << ','
        << (r.is_global_max ? "true" : "false") << ',' << (r.degenerate_tie ? "true" : "false")
        << '\n';
    finish(out, file);
  }
  {
    const auto file = directory / "manifest.txt";
    auto out = open_output(file);
    out << manifest_text(result.config);
    finish(out, file);
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result = compute_experiment(config);
  write_experiment(result, config.output_dir);
  return result;
}

std::vector<SweepRow> run_convergence_sweep(const ExperimentConfig& base, SweepAxis axis,
                                            std::span<const double> values) {
  if (values.empty()) throw UsageError("sweep needs at least one setting");
  ExperimentConfig config = base;
  config.fvalues = resolve_fvalues(base);
  config.rescue = false;
  std::vector<SweepRow> rows;
  for (double v : values) {
    if (axis == SweepAxis::kPopulation) {
      if (!(v >= 1.0) || v != std::floor(v))
        throw UsageError("population sweep values must be positive integers");
      config.population = std::size_t(v);
    } else {
      config.sigma = v;
    }
    rows.push_back({v, compute_experiment(config).max_deviation()});
  }
  return rows;
}

void write_sweep_csv(SweepAxis axis, std::span<const SweepRow> rows,
                     const std::filesystem::path& file) {
  auto out = open_output(file);
  out << (axis == SweepAxis::kPopulation ? "population" : "sigma") << ",max_deviation\n";
  for (const auto& row : rows)
    out << format_double(row.setting) << ',' << format_double(row.max_deviation) << '\n';
  finish(out, file);
}

}  // namespace schemagrain
