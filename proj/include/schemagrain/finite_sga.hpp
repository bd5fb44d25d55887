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

#ifndef SCHEMAGRAIN_FINITE_SGA_HPP_
#define SCHEMAGRAIN_FINITE_SGA_HPP_

// Finite-population SGA over B_order with a stochastic fitness function:
// fitness-proportional selection, uniform crossover, no mutation.
//
// Sampling procedure (fixed, so that a seed reproduces a run exactly):
//   * the generator is std::mt19937_64;
//   * an initial genome is the low `order` bits of one generator output;
//   * each generation draws one fitness per individual, in increasing
//     genome-index order, as max(0, mean + sigma * z) with z from
//     std::normal_distribution<double>(0, 1);
//   * each child draws parent one, then parent two, by roulette wheel over
//     the individuals (std::uniform_real_distribution<double>(0, total)),
//     then its crossover mask as the low `order` bits of one generator output.
// Bit-identical results hold for a given standard library implementation.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace schemagrain {

using Rng = std::mt19937_64;

/// Genome counts of a finite population over B_order.
class Population {
 public:
  /// Throws DimensionError unless counts has 2^order entries, ArgumentError
  /// if the population is empty.
  Population(unsigned order, std::vector<std::uint64_t> counts);

  /// `size` independent uniform draws over B_order.
  static Population uniform_random(unsigned order, std::size_t size, Rng& rng);

  unsigned order() const noexcept { return order_; }
  std::size_t size() const noexcept { return size_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::vector<double> frequencies() const;

 private:
  unsigned order_;
  std::size_t size_;
  std::vector<std::uint64_t> counts_;
};

/// Inclusive bounds that f-values must lie in.
struct FValueRange {
  double lo = 2.0;
  double hi = 3.0;
};

/// Genome g has fitness N(means[g], sigma^2), clamped below at zero.
class StochasticFitness {
 public:
  StochasticFitness(std::vector<double> means, double sigma, FValueRange range = {});

  std::span<const double> means() const noexcept { return means_; }
  double sigma() const noexcept { return sigma_; }

 private:
  std::vector<double> means_;
  double sigma_;
};

/// One fresh fitness sample for genome `genome`.
double sample_fitness(const StochasticFitness& fitness, std::size_t genome, Rng& rng);

/// Produces the next generation. Throws DegenerateSelectionError (carrying
/// `generation`) when every sampled fitness is zero.
Population next_generation(const Population& population, const StochasticFitness& fitness,
                           Rng& rng, std::size_t generation = 0);

/// rows[t][g]: frequency of genome g in generation t.
struct FrequencyTable {
  unsigned order = 0;
  std::size_t population = 0;
  std::vector<std::vector<double>> rows;
};

FrequencyTable run_sfsga(unsigned order, std::size_t population, const StochasticFitness& fitness,
                         std::size_t generations, std::uint64_t seed);

/// Seed of replicate `index` derived from `master_seed`.
std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t index);

/// `replicates` independent runs seeded by replicate_seed, spread across up
/// to `threads` workers (0 = hardware concurrency). Results are in run order
/// regardless of scheduling.
std::vector<FrequencyTable> run_replicates(unsigned order, std::size_t population,
                                           const StochasticFitness& fitness,
                                           std::size_t generations, std::uint64_t master_seed,
                                           std::size_t replicates, std::size_t threads = 0);

/// Per generation and genome: mean and sample standard deviation (r - 1
/// denominator, 0 for a single run) across replicate runs.
struct RunStatistics {
  std::size_t replicates = 0;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stddev;
};

RunStatistics aggregate_runs(std::span<const FrequencyTable> tables);

struct RescueReport {
  /// Highest-frequency genome in the final generation (lowest index on ties).
  std::size_t winner = 0;
  double winner_fvalue = 0.0;
  double mean_fvalue = 0.0;
  /// winner_fvalue strictly exceeds mean_fvalue.
  bool above_average = false;
  /// The winner has the largest f-value (ties count).
  bool is_global_max = false;
  /// All f-values are equal, so no genome can be above average.
  bool degenerate_tie = false;
};

RescueReport rescue_check(const RunStatistics& stats, std::span<const double> fvalues);

}  // namespace schemagrain

#endif  // SCHEMAGRAIN_FINITE_SGA_HPP_
