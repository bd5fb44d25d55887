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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "schemagrain/errors.hpp"
#include "schemagrain/evolution.hpp"
#include "schemagrain/finite_sga.hpp"
#include "schemagrain/sga_operators.hpp"

using namespace schemagrain;

namespace {

RunStatistics stats_from_final(std::vector<double> freqs) {
  RunStatistics s;
  s.replicates = 1;
  s.mean = {freqs};
  s.stddev = {std::vector<double>(freqs.size(), 0.0)};
  return s;
}

}  // namespace

TEST_CASE("population validation") {
  CHECK_THROWS_AS(Population(2, {1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(Population(1, {0, 0}), ArgumentError);
  const Population p(1, {1, 3});
  CHECK(p.size() == 4);
  CHECK(p.frequencies() == std::vector<double>{0.25, 0.75});
  Rng rng(1);
  const auto u = Population::uniform_random(3, 8000, rng);
  CHECK(u.size() == 8000);
  for (double f : u.frequencies()) CHECK(std::abs(f - 0.125) < 0.02);
}

TEST_CASE("stochastic fitness") {
  CHECK_THROWS_AS(StochasticFitness({2.5, 3.5}, 0.1), ArgumentError);
  CHECK_THROWS_AS(StochasticFitness({2.5}, -0.1), ArgumentError);
  CHECK_NOTHROW(StochasticFitness({0.0}, 0.8, FValueRange{0.0, 3.0}));
  Rng rng(2);
  const StochasticFitness exact({2.2, 2.7}, 0.0);
  for (int i = 0; i < 100; ++i) CHECK(sample_fitness(exact, 1, rng) == 2.7);
  const StochasticFitness noisy({2.5, 0.0}, 0.8, FValueRange{0.0, 3.0});
  double sum = 0.0;
  std::size_t zeros = 0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) sum += sample_fitness(noisy, 0, rng);
  for (int i = 0; i < draws; ++i) zeros += sample_fitness(noisy, 1, rng) == 0.0;
  CHECK(std::abs(sum / draws - 2.5) < 0.01);
  CHECK(std::abs(double(zeros) / draws - 0.5) < 0.01);
}

TEST_CASE("next generation of a uniform population is unchanged") {
  Rng rng(3);
  std::vector<std::uint64_t> counts(8, 0);
  counts[5] = 500;
  const StochasticFitness sf({2, 2.1, 2.2, 2.3, 2.4, 2.5, 2.6, 2.7}, 0.8);
  const auto next = next_generation(Population(3, counts), sf, rng);
  CHECK(std::vector<std::uint64_t>(next.counts().begin(), next.counts().end()) == counts);
}

TEST_CASE("one-bit selection expectation") {
  const StochasticFitness sf({2.0, 3.0}, 0.0);
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    sum += next_generation(Population(1, {500, 500}), sf, rng).frequencies()[1];
  }
  CHECK(std::abs(sum / 200 - 0.6) <= 0.005);
}

TEST_CASE("expected next generation matches the epoch operator") {
  const std::vector<double> means{2.0, 2.9, 2.3, 2.6, 2.1, 2.8, 2.4, 2.5};
  const std::vector<std::uint64_t> counts{20000, 5000, 15000, 10000, 5000, 25000, 10000, 10000};
  const StochasticFitness sf(means, 0.0);
  const Population pop(3, counts);
  std::vector<double> mean(8, 0.0);
  const int seeds = 5;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(1000 + seed);
    const auto f = next_generation(pop, sf, rng).frequencies();
    for (std::size_t g = 0; g < 8; ++g) mean[g] += f[g] / seeds;
  }
  const EvolutionMachine ipsga(projected_uniform_crossover(3), FitnessFunction(IndexedSet(8), means));
  const auto expected = epoch(ipsga, Distribution(IndexedSet(8), pop.frequencies()));
  for (std::size_t g = 0; g < 8; ++g) CHECK(std::abs(mean[g] - expected[g]) <= 0.01);
}

TEST_CASE("degenerate selection") {
  const StochasticFitness dead({0.0, 0.0}, 0.0, FValueRange{0.0, 1.0});
  Rng rng(4);
  CHECK_THROWS_AS(next_generation(Population(1, {3, 3}), dead, rng), DegenerateSelectionError);
  try {
    run_sfsga(1, 10, dead, 5, 9);
    FAIL("expected degenerate selection");
  } catch (const DegenerateSelectionError& e) {
    REQUIRE(e.generation().has_value());
    CHECK(*e.generation() == 0);
  }
}

TEST_CASE("run_sfsga tables") {
  const StochasticFitness sf({2.0, 2.9, 2.3, 2.6, 2.1, 2.8, 2.4, 2.5}, 0.8);
  const auto only = run_sfsga(3, 4000, sf, 0, 5);
  REQUIRE(only.rows.size() == 1);
  for (double f : only.rows[0]) CHECK(std::abs(f - 0.125) < 0.03);
  const auto t = run_sfsga(3, 777, sf, 12, 5);
  REQUIRE(t.rows.size() == 13);
  for (const auto& row : t.rows) {
    double sum = 0.0;
    for (double f : row) {
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
      // Every frequency is a count over N.
      CHECK(std::abs(f * 777 - std::round(f * 777)) < 1e-9);
      sum += f;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto again = run_sfsga(3, 777, sf, 12, 5);
  CHECK(again.rows == t.rows);
  CHECK(run_sfsga(3, 777, sf, 12, 6).rows != t.rows);
}

TEST_CASE("replicates are independent of thread count") {
  const StochasticFitness sf({2.0, 2.9, 2.3, 2.6, 2.1, 2.8, 2.4, 2.5}, 0.8);
  const auto one = run_replicates(3, 300, sf, 8, 77, 6, 1);
  const auto many = run_replicates(3, 300, sf, 8, 77, 6, 4);
  REQUIRE(one.size() == 6);
  for (std::size_t r = 0; r < 6; ++r) {
    CHECK(one[r].rows == many[r].rows);
    CHECK(one[r].rows == run_sfsga(3, 300, sf, 8, replicate_seed(77, r)).rows);
  }
  CHECK(replicate_seed(77, 0) != replicate_seed(77, 1));
  CHECK(replicate_seed(77, 0) != replicate_seed(78, 0));
}

TEST_CASE("aggregate runs") {
  FrequencyTable a{1, 10, {{0.4, 0.6}}}, b{1, 10, {{0.6, 0.4}}};
  const std::vector<FrequencyTable> single{a};
  const auto s1 = aggregate_runs(single);
  CHECK(s1.mean == a.rows);
  CHECK(s1.stddev[0] == std::vector<double>{0.0, 0.0});
  const std::vector<FrequencyTable> twins{a, a};
  CHECK(aggregate_runs(twins).stddev[0] == std::vector<double>{0.0, 0.0});
  const std::vector<FrequencyTable> pair{a, b};
  const auto s2 = aggregate_runs(pair);
  CHECK(s2.mean[0][0] == doctest::Approx(0.5));
  CHECK(s2.stddev[0][0] == doctest::Approx(0.1414).epsilon(1e-3));
  FrequencyTable longer{1, 10, {{0.5, 0.5}, {0.5, 0.5}}};
  const std::vector<FrequencyTable> bad{a, longer};
  CHECK_THROWS_AS(aggregate_runs(bad), DimensionError);
}

TEST_CASE("rescue check") {
  const std::vector<double> flat{2.5, 2.5, 2.5};
  const auto tie = rescue_check(stats_from_final({0.2, 0.5, 0.3}), flat);
  CHECK(tie.winner == 1);
  CHECK_FALSE(tie.above_average);
  CHECK(tie.degenerate_tie);
  const std::vector<double> two{2.1, 2.9};
  const auto r = rescue_check(stats_from_final({0.1, 0.9}), two);
  CHECK(r.winner == 1);
  CHECK(r.above_average);
  CHECK(r.is_global_max);
  CHECK(r.mean_fvalue == doctest::Approx(2.5));
  const std::vector<double> three{2.1, 2.6, 2.9};
  const auto second = rescue_check(stats_from_final({0.2, 0.4, 0.4}), three);
  CHECK(second.winner == 1);
  CHECK(second.above_average);
  CHECK_FALSE(second.is_global_max);
}
