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

#include "schemagrain/finite_sga.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <utility>

#include "schemagrain/errors.hpp"
#include "schemagrain/sga_operators.hpp"

namespace schemagrain {

namespace {

std::uint64_t low_bits_mask(unsigned order) { return (std::uint64_t{1} << order) - 1; }

void require_order(unsigned order) {
  if (order < 1 || order > kMaxGenomeLength)
    throw ArgumentError("genome order must be in 1.." + std::to_string(kMaxGenomeLength));
}

double draw_fitness(const StochasticFitness& fitness, std::size_t genome, Rng& rng,
                    std::normal_distribution<double>& normal) {
  const double value = fitness.means()[genome] + fitness.sigma() * normal(rng);
  return value < 0.0 ? 0.0 : value;
}

}  // namespace

Population::Population(unsigned order, std::vector<std::uint64_t> counts)
    : order_(order), size_(0), counts_(std::move(counts)) {
  require_order(order);
  if (counts_.size() != (std::size_t{1} << order))
    throw DimensionError("population counts must cover all 2^order genomes");
  for (auto c : counts_) size_ += c;
  if (size_ == 0) throw ArgumentError("population must not be empty");
}

Population Population::uniform_random(unsigned order, std::size_t size, Rng& rng) {
  require_order(order);
  if (size == 0) throw ArgumentError("population must not be empty");
  std::vector<std::uint64_t> counts(std::size_t{1} << order, 0);
  for (std::size_t i = 0; i < size; ++i) ++counts[rng() & low_bits_mask(order)];
  return Population(order, std::move(counts));
}

std::vector<double> Population::frequencies() const {
  std::vector<double> out(counts_.size());
  for (std::size_t g = 0; g < counts_.size(); ++g) out[g] = double(counts_[g]) / double(size_);
  return out;
}

StochasticFitness::StochasticFitness(std::vector<double> means, double sigma, FValueRange range)
    : means_(std::move(means)), sigma_(sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw ArgumentError("fitness standard deviation must be nonnegative");
  if (!(range.lo <= range.hi)) throw ArgumentError("f-value range must satisfy lo <= hi");
  for (double m : means_)
    if (!(m >= range.lo && m <= range.hi))
      throw ArgumentError("f-value " + std::to_string(m) + " outside [" +
                          std::to_string(range.lo) + "," + std::to_string(range.hi) + "]");
  if (means_.empty()) throw ArgumentError("stochastic fitness needs at least one f-value");
}

double sample_fitness(const StochasticFitness& fitness, std::size_t genome, Rng& rng) {
  if (genome >= fitness.means().size()) throw DimensionError("genome index out of range");
  std::normal_distribution<double> normal(0.0, 1.0);
  return draw_fitness(fitness, genome, rng, normal);
}

Population next_generation(const Population& population, const StochasticFitness& fitness,
                           Rng& rng, std::size_t generation) {
  const unsigned order = population.order();
  const auto counts = population.counts();
  if (fitness.means().size() != counts.size())
    throw DimensionError("stochastic fitness and population cover different genome sets");
  const std::size_t n = population.size();

  std::vector<std::uint32_t> genome_of(n);
  std::vector<double> cumulative(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  double total = 0.0;
  std::size_t i = 0;
  std::size_t last_positive = 0;
  for (std::size_t g = 0; g < counts.size(); ++g) {
    for (std::uint64_t c = 0; c < counts[g]; ++c, ++i) {
      genome_of[i] = std::uint32_t(g);
      const double f = draw_fitness(fitness, g, rng, normal);
      if (f > 0.0) last_positive = i;
      total += f;
      cumulative[i] = total;
    }
  }
  if (!(total > 0.0)) throw DegenerateSelectionError(generation);

  std::uniform_real_distribution<double> wheel(0.0, total);
  auto spin = [&]() -> std::uint32_t {
    const double u = wheel(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t idx = it == cumulative.end() ? last_positive
                                                   : std::size_t(it - cumulative.begin());
    return genome_of[idx];
  };

  const std::uint64_t mask_bits = low_bits_mask(order);
  std::vector<std::uint64_t> next(counts.size(), 0);
  for (std::size_t child = 0; child < n; ++child) {
    const std::uint64_t first = spin();
    const std::uint64_t second = spin();
    const std::uint64_t mask = rng() & mask_bits;
    ++next[(first & ~mask) | (second & mask)];
  }
  return Population(order, std::move(next));
}

FrequencyTable run_sfsga(unsigned order, std::size_t population, const StochasticFitness& fitness,
                         std::size_t generations, std::uint64_t seed) {
  require_order(order);
  if (fitness.means().size() != (std::size_t{1} << order))
    throw DimensionError("need one f-value per genome of B_order");
  Rng rng(seed);
  FrequencyTable table{order, population, {}};
  table.rows.reserve(generations + 1);
  Population current = Population::uniform_random(order, population, rng);
  table.rows.push_back(current.frequencies());
  for (std::size_t t = 1; t <= generations; ++t) {
    current = next_generation(current, fitness, rng, t - 1);
    table.rows.push_back(current.frequencies());
  }
  return table;
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t index) {
  std::seed_seq seq{std::uint32_t(master_seed), std::uint32_t(master_seed >> 32),
                    std::uint32_t(0x5F5A), std::uint32_t(index), std::uint32_t(index >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (std::uint64_t{words[0]} << 32) | words[1];
}

std::vector<FrequencyTable> run_replicates(unsigned order, std::size_t population,
                                           const StochasticFitness& fitness,
                                           std::size_t generations, std::uint64_t master_seed,
                                           std::size_t replicates, std::size_t threads) {
  std::vector<FrequencyTable> out(replicates);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, replicates);
  if (threads <= 1) {
    for (std::size_t r = 0; r < replicates; ++r)
      out[r] = run_sfsga(order, population, fitness, generations, replicate_seed(master_seed, r));
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(replicates);
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t r = next++; r < replicates; r = next++) {
        try {
          out[r] = run_sfsga(order, population, fitness, generations,
                             replicate_seed(master_seed, r));
        } catch (...) {
          errors[r] = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

RunStatistics aggregate_runs(std::span<const FrequencyTable> tables) {
  if (tables.empty()) throw ArgumentError("aggregate_runs needs at least one run");
  const std::size_t gens = tables[0].rows.size();
  const std::size_t genomes = gens ? tables[0].rows[0].size() : 0;
  for (const auto& t : tables) {
    if (t.rows.size() != gens) throw DimensionError("runs have different numbers of generations");
    for (const auto& row : t.rows)
      if (row.size() != genomes) throw DimensionError("runs cover different genome sets");
  }
  const double r = double(tables.size());
  RunStatistics stats;
  stats.replicates = tables.size();
  stats.mean.assign(gens, std::vector<double>(genomes, 0.0));
  stats.stddev.assign(gens, std::vector<double>(genomes, 0.0));
  for (std::size_t t = 0; t < gens; ++t) {
    for (std::size_t g = 0; g < genomes; ++g) {
      double sum = 0.0;
      for (const auto& run : tables) sum += run.rows[t][g];
      const double mean = sum / r;
      double squares = 0.0;
      for (const auto& run : tables) squares += (run.rows[t][g] - mean) * (run.rows[t][g] - mean);
      stats.mean[t][g] = mean;
      stats.stddev[t][g] = tables.size() > 1 ? std::sqrt(squares / (r - 1.0)) : 0.0;
    }
  }
  return stats;
}

RescueReport rescue_check(const RunStatistics& stats, std::span<const double> fvalues) {
  if (stats.mean.empty()) throw ArgumentError("rescue_check needs at least one generation");
  const auto& last = stats.mean.back();
  if (last.size() != fvalues.size()) throw DimensionError("one f-value per genome is required");
  RescueReport report;
  report.winner = std::size_t(std::max_element(last.begin(), last.end()) - last.begin());
  report.winner_fvalue = fvalues[report.winner];
  double sum = 0.0;
  for (double f : fvalues) sum += f;
  report.mean_fvalue = sum / double(fvalues.size());
  const auto [lo, hi] = std::minmax_element(fvalues.begin(), fvalues.end());
  report.is_global_max = report.winner_fvalue >= *hi;
  report.degenerate_tie = *lo == *hi;
  // With equal f-values the computed mean can differ from them by rounding.
  report.above_average = !report.degenerate_tie && report.winner_fvalue > report.mean_fvalue;
  return report;
}

}  // namespace schemagrain
