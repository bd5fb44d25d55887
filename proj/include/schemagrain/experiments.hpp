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

#ifndef SCHEMAGRAIN_EXPERIMENTS_HPP_
#define SCHEMAGRAIN_EXPERIMENTS_HPP_

// Experiment harness comparing the exact order-o machine (fitness-
// proportional selection, uniform crossover, uniform start) with replicate
// runs of the finite-population stochastic-fitness SGA.
//
// Output files, all CSV with a header row:
//   ipsga2.csv, sfsga_mean.csv, sfsga_std.csv   generation,genome_bits,value
//   fvalues.csv                                 genome_bits,value
//   rescue_report.csv (rescue runs only)        see write_experiment
//   manifest.txt                                every effective setting
// Genomes are rendered with locus 1 leftmost.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schemagrain/evolution.hpp"
#include "schemagrain/finite_sga.hpp"

namespace schemagrain {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct ExperimentConfig {
  /// Preset the settings started from, 0 for none.
  int preset = 0;
  unsigned order = 3;
  std::size_t population = 2000;
  std::size_t replicates = 1;
  std::size_t generations = 30;
  double sigma = 0.8;
  /// Explicit f-values in genome-index order; when empty they are drawn
  /// uniformly from [f_lo, f_hi] with fvalue_seed (or seed, if unset).
  std::vector<double> fvalues;
  double f_lo = 2.0;
  double f_hi = 3.0;
  std::optional<std::uint64_t> fvalue_seed;
  std::uint64_t seed = 42;
  /// Also report whether the final top-frequency genome is above average.
  bool rescue = false;
  std::string output_dir = ".";
  /// Worker threads for replicate runs (0 = hardware concurrency). Results
  /// do not depend on it.
  std::size_t threads = 0;

  /// Throws UsageError if a field is out of range.
  void validate() const;
};

/// Settings of experiments 1..12. Throws UsageError for other ids.
ExperimentConfig preset(int id);

/// Applies one `key = value` setting. Keys: preset, o, n, r, generations,
/// sigma, fvalues, frange, seed, fvalue_seed, rescue, out. `preset` resets
/// every other field to the preset's values. `tool_version` is accepted and
/// ignored. Throws UsageError on unknown keys or malformed values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Applies `key = value` lines; blank lines and `#` comments are skipped.
void apply_config_text(ExperimentConfig& config, std::string_view text);

/// Reads a config file (IoError if unreadable) and applies it.
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

/// Every effective setting in config-file syntax, so that applying it to a
/// default config reproduces the experiment.
std::string manifest_text(const ExperimentConfig& config);

std::vector<double> resolve_fvalues(const ExperimentConfig& config);

/// Exact trajectory of the order-o machine with the given f-values as fitness.
Trajectory ipsga2_trajectory(unsigned order, std::span<const double> fvalues,
                             std::size_t generations);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<double> fvalues;
  Trajectory ipsga2;
  RunStatistics sfsga;
  std::optional<RescueReport> rescue;

  /// Largest |sfsga mean - ipsga2| over generations and genomes.
  double max_deviation() const;
};

ExperimentResult compute_experiment(const ExperimentConfig& config);

/// Writes the CSVs and manifest into `directory`, creating it if needed.
/// Throws IoError on failure.
void write_experiment(const ExperimentResult& result, const std::filesystem::path& directory);

/// compute_experiment followed by write_experiment into config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

double max_deviation(const RunStatistics& stats, const Trajectory& exact);

enum class SweepAxis { kPopulation, kSigma };

struct SweepRow {
  double setting = 0.0;
  double max_deviation = 0.0;
};

/// One experiment per value of the swept setting, all with the base
/// config's f-values and seed.
std::vector<SweepRow> run_convergence_sweep(const ExperimentConfig& base, SweepAxis axis,
                                            std::span<const double> values);

/// Header `population,max_deviation` or `sigma,max_deviation`.
void write_sweep_csv(SweepAxis axis, std::span<const SweepRow> rows,
                     const std::filesystem::path& file);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace schemagrain

#endif  // SCHEMAGRAIN_EXPERIMENTS_HPP_
