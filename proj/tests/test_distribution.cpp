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
#include <random>
#include <vector>

#include "oracles.hpp"
#include "schemagrain/distribution.hpp"
#include "schemagrain/errors.hpp"

using namespace schemagrain;

namespace {

Distribution dist(std::vector<double> m) {
  const std::size_t n = m.size();
  return Distribution(IndexedSet(n), std::move(m));
}

FitnessFunction fit(std::vector<double> v) {
  const std::size_t n = v.size();
  return FitnessFunction(IndexedSet(n), std::move(v));
}

ThemeMap first_bit_of_two() { return ThemeMap(IndexedSet(4), IndexedSet(2), {0, 0, 1, 1}); }

}  // namespace

TEST_CASE("distribution validation") {
  CHECK_NOTHROW(dist({0.25, 0.75}));
  CHECK_NOTHROW(dist({0.0, 0.0}));
  CHECK(dist({0.0, 0.0}).is_zero());
  CHECK_FALSE(dist({0.5, 0.5}).is_zero());
  CHECK_THROWS_AS(dist({0.5, 0.6}), ArgumentError);
  CHECK_THROWS_AS(dist({-0.1, 1.1}), ArgumentError);
  CHECK_THROWS_AS(dist({std::nan(""), 1.0}), ArgumentError);
  CHECK_THROWS_AS(Distribution(IndexedSet(3), {0.5, 0.5}), DimensionError);
  CHECK(Distribution::uniform(IndexedSet(4))[2] == doctest::Approx(0.25));
  CHECK(Distribution::point(IndexedSet(3), 1)[1] == 1.0);
  CHECK(Distribution::zero(IndexedSet(3)).total() == 0.0);
}

TEST_CASE("fitness and theme map validation") {
  CHECK_THROWS_AS(fit({1.0, -1.0}), ArgumentError);
  CHECK_THROWS_AS(fit({1.0, INFINITY}), ArgumentError);
  CHECK_NOTHROW(fit({0.0, 1.0}));
  CHECK_THROWS_AS(ThemeMap(IndexedSet(3), IndexedSet(2), {0, 0, 0}), ArgumentError);
  CHECK_THROWS_AS(ThemeMap(IndexedSet(3), IndexedSet(2), {0, 1, 2}), ArgumentError);
  CHECK_THROWS_AS(ThemeMap(IndexedSet(3), IndexedSet(2), {0, 1}), DimensionError);
  const ThemeMap b = first_bit_of_two();
  CHECK(std::vector<std::size_t>(b.theme_class(1).begin(), b.theme_class(1).end()) ==
        std::vector<std::size_t>{2, 3});
}

TEST_CASE("expectation") {
  CHECK(expectation(fit({1, 1}), dist({0.5, 0.5})) == doctest::Approx(1.0));
  CHECK(expectation(fit({7, 9}), Distribution::zero(IndexedSet(2))) == 0.0);
  CHECK(expectation(fit({2, 3}), dist({0.25, 0.75})) == doctest::Approx(2.75));
  CHECK_THROWS_AS(expectation(fit({2, 3, 4}), dist({0.25, 0.75})), DimensionError);
}

TEST_CASE("selection") {
  const auto p = dist({0.1, 0.2, 0.7});
  const auto same = select(fit({4, 4, 4}), p);
  for (std::size_t i = 0; i < 3; ++i) CHECK(same[i] == doctest::Approx(p[i]));
  const auto q = select(fit({2, 3}), dist({0.5, 0.5}));
  CHECK(q[0] == doctest::Approx(0.4));
  CHECK(q[1] == doctest::Approx(0.6));
  const auto r = select(fit({1, 0}), dist({0.5, 0.5}));
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == 0.0);
  CHECK_THROWS_AS(select(fit({0, 0}), dist({0.5, 0.5})), DegenerateSelectionError);
  CHECK_THROWS_AS(select(fit({0, 1}), dist({1.0, 0.0})), DegenerateSelectionError);
}

TEST_CASE("projection") {
  const auto p = dist({0.1, 0.2, 0.3, 0.4});
  const auto id = project(ThemeMap::identity(IndexedSet(4)), p);
  for (std::size_t i = 0; i < 4; ++i) CHECK(id[i] == p[i]);
  const auto q = project(first_bit_of_two(), p);
  CHECK(q[0] == doctest::Approx(0.3));
  CHECK(q[1] == doctest::Approx(0.7));
  CHECK_THROWS_AS(project(first_bit_of_two(), dist({0.5, 0.5})), DimensionError);
}

TEST_CASE("theme conditional") {
  const auto c = theme_conditional(first_bit_of_two(), Distribution::uniform(IndexedSet(4)), 0);
  CHECK(c[0] == doctest::Approx(0.5));
  CHECK(c[1] == doctest::Approx(0.5));
  CHECK(c[2] == 0.0);
  CHECK(c[3] == 0.0);
  CHECK(theme_conditional(first_bit_of_two(), dist({0.5, 0.5, 0, 0}), 1).is_zero());
  const auto pt = theme_conditional(first_bit_of_two(), Distribution::point(IndexedSet(4), 3), 1);
  CHECK(pt[3] == doctest::Approx(1.0));
}

TEST_CASE("manhattan") {
  const auto a = dist({0.2, 0.3, 0.5});
  CHECK(manhattan(a, a) == 0.0);
  CHECK(manhattan(dist({0, 1}), dist({1, 0})) == doctest::Approx(2.0));
  CHECK(manhattan(dist({0.5, 0.5, 0, 0}), dist({0, 0, 0.25, 0.75})) == doctest::Approx(2.0));
  const std::vector<double> x{1, 2}, y{1, 2, 3};
  CHECK_THROWS_AS(manhattan(x, y), DimensionError);
}

TEST_CASE("renormalize") {
  std::vector<double> m{0.5, 0.5 + 1e-10};
  CHECK(renormalize(m) == doctest::Approx(1e-10));
  CHECK(m[0] + m[1] == doctest::Approx(1.0).epsilon(1e-15));
  std::vector<double> ok{0.25, 0.75};
  CHECK(renormalize(ok) == 0.0);
}

TEST_CASE("property: projection conserves mass and matches summation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    const std::size_t k = 1 + rng() % n;
    std::vector<std::size_t> assign(n);
    for (std::size_t x = 0; x < n; ++x) assign[x] = x < k ? x : rng() % k;
    std::shuffle(assign.begin(), assign.end(), rng);
    const ThemeMap beta(IndexedSet(n), IndexedSet(k), assign);
    const auto p = oracle::random_distribution(n, rng);
    const auto q = project(beta, Distribution(IndexedSet(n), p));
    const auto expected = oracle::project(assign, k, p);
    double total = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
      CHECK(q[t] == doctest::Approx(expected[t]).epsilon(1e-12));
      total += q[t];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // p equals the mixture of its theme conditionals weighted by q.
    std::vector<double> rebuilt(n, 0.0);
    for (std::size_t t = 0; t < k; ++t) {
      const auto c = theme_conditional(beta, Distribution(IndexedSet(n), p), t);
      for (std::size_t x = 0; x < n; ++x) rebuilt[x] += q[t] * c[x];
    }
    CHECK(oracle::max_abs_diff(rebuilt, p) < 1e-12);
  }
}

TEST_CASE("property: selection reweights by fitness") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    const auto p = oracle::random_distribution(n, rng);
    std::vector<double> f(n);
    for (double& v : f) v = u(rng);
    const auto q = select(fit(f), Distribution(IndexedSet(n), p));
    double mean = 0.0;
    for (std::size_t x = 0; x < n; ++x) mean += f[x] * p[x];
    double total = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      CHECK(q[x] == doctest::Approx(f[x] * p[x] / mean).epsilon(1e-12));
      total += q[x];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // Selection never lowers the mean fitness.
    CHECK(expectation(fit(f), q) >= mean - 1e-12);
  }
}

TEST_CASE("property: manhattan is a metric bounded by two") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 16;
    const auto a = oracle::random_distribution(n, rng);
    const auto b = oracle::random_distribution(n, rng);
    const auto c = oracle::random_distribution(n, rng);
    const double ab = manhattan(a, b), ba = manhattan(b, a);
    CHECK(ab == ba);
    CHECK(ab >= 0.0);
    CHECK(ab <= 2.0 + 1e-12);
    CHECK(ab <= manhattan(a, c) + manhattan(c, b) + 1e-12);
  }
}
