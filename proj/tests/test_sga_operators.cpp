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
#include <map>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "schemagrain/errors.hpp"
#include "schemagrain/sga_operators.hpp"
#include "schemagrain/transmission.hpp"

using namespace schemagrain;

namespace {

using Parents = std::vector<std::size_t>;

std::vector<double> as_vector(const Distribution& d) {
  return std::vector<double>(d.mass().begin(), d.mass().end());
}

/// Largest pointwise gap between two transmission functions of equal shape.
double table_gap(const TransmissionFunction& a, const TransmissionFunction& b) {
  double worst = 0.0;
  for_each_parent_tuple(a.size(), a.arity(), [&](std::span<const std::size_t> ps) {
    const auto x = a.child_distribution(ps), y = b.child_distribution(ps);
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  });
  return worst;
}

double crossover_oracle_gap(const TransmissionFunction& t, unsigned length,
                            const std::map<std::size_t, double>& masks) {
  double worst = 0.0;
  const std::size_t n = std::size_t{1} << length;
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t z = 0; z < n; ++z) {
      const Parents ps{y, z};
      for (std::size_t x = 0; x < n; ++x)
        worst = std::max(worst, std::abs(t(x, ps) - oracle::mask_crossover(length, masks, x, y, z)));
    }
  return worst;
}

}  // namespace

TEST_CASE("bit conventions") {
  CHECK(to_bits(0b110, 3) == "110");
  CHECK(to_bits(1, 4) == "0001");
  CHECK(from_bits("10110") == 22);
  CHECK_THROWS_AS(from_bits("10a"), ArgumentError);
  CHECK(locus_bit(3, 1) == 4);
  CHECK(locus_bit(3, 3) == 1);
  for (std::size_t x = 0; x < 64; ++x) CHECK(to_bits(x, 6) == oracle::bits(x, 6));
}

TEST_CASE("schema maps") {
  const auto id = schema_map(3, {1, 2, 3});
  for (std::size_t x = 0; x < 8; ++x) CHECK(id(x) == x);
  CHECK(schema_map(3, {1})(from_bits("110")) == 1);
  CHECK(schema_map(5, {1, 3})(from_bits("10110")) == from_bits("11"));
  CHECK_THROWS_AS(schema_map(3, {}), ArgumentError);
  CHECK_THROWS_AS(schema_map(3, {2, 1}), ArgumentError);
  CHECK_THROWS_AS(schema_map(3, {1, 1}), ArgumentError);
  CHECK_THROWS_AS(schema_map(3, {0}), ArgumentError);
  CHECK_THROWS_AS(schema_map(3, {4}), ArgumentError);
  // C(5,1) + C(5,2) + C(5,3)
  CHECK(all_schema_maps(5, 3).size() == 25);
}

TEST_CASE("property: schema maps extract the defined bits") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned length = 1 + rng() % 8;
    std::vector<unsigned> loci;
    for (unsigned l = 1; l <= length; ++l)
      if (rng() % 2) loci.push_back(l);
    if (loci.empty()) loci.push_back(1 + rng() % length);
    const auto s = schema_map(length, loci);
    CHECK(s.theme_map().codomain().size() == (std::size_t{1} << loci.size()));
    for (std::size_t x = 0; x < (std::size_t{1} << length); ++x)
      CHECK(s(x) == oracle::schema_theme(length, loci, x));
    // Uniform over B_l projects to uniform over B_o.
    const auto q = project(s, Distribution::uniform(IndexedSet(std::size_t{1} << length)));
    for (double v : q.mass()) CHECK(v == doctest::Approx(1.0 / double(q.size())));
  }
}

TEST_CASE("canonical mutation") {
  const auto m = canonical_mutation(2, 0.1);
  CHECK(m(0b00, Parents{0b00}) == doctest::Approx(0.81));
  CHECK(m(0b11, Parents{0b00}) == doctest::Approx(0.01));
  CHECK(table_gap(canonical_mutation(3, 0.0), TransmissionFunction::clone(IndexedSet(8))) == 0.0);
  CHECK_THROWS_AS(canonical_mutation(2, -0.1), ArgumentError);
  CHECK_THROWS_AS(canonical_mutation(2, 1.1), ArgumentError);
  for (double a : {0.0, 0.01, 0.3, 0.5, 1.0}) {
    const auto t = canonical_mutation(4, a);
    for (std::size_t y = 0; y < 16; ++y)
      for (std::size_t x = 0; x < 16; ++x)
        CHECK(t(x, Parents{y}) == doctest::Approx(oracle::mutation(4, a, x, y)).epsilon(1e-14));
  }
  const auto th = theme_transmission(canonical_mutation(5, 0.2), schema_map(5, {4}));
  CHECK(th(1, Parents{0}) == doctest::Approx(0.2));
  CHECK(th(1, Parents{1}) == doctest::Approx(0.8));
}

TEST_CASE("mask crossover") {
  const auto keep = mask_crossover(Mask::parse("000"));
  for (std::size_t y = 0; y < 8; ++y)
    for (std::size_t z = 0; z < 8; ++z) CHECK(keep(y, Parents{y, z}) == 1.0);
  CHECK(mask_crossover(Mask::parse("011"))(from_bits("011"), Parents{0b000, 0b111}) == 1.0);
  CHECK(Mask::parse("011").from_second(2));
  CHECK_FALSE(Mask::parse("011").from_second(1));
  CHECK_THROWS_AS(Mask::parse("0x1"), ArgumentError);
  for (std::size_t psi = 0; psi < 16; ++psi) {
    const auto t = mask_crossover(Mask(4, psi));
    for (std::size_t y = 0; y < 16; ++y)
      for (std::size_t z = 0; z < 16; ++z) {
        const auto child = t.child_distribution(Parents{y, z});
        CHECK(std::count(child.begin(), child.end(), 1.0) == 1);
        CHECK(child[oracle::mask_child(4, psi, y, z)] == 1.0);
      }
  }
  // Single defined locus: the child bit comes from the parent that psi names.
  const auto psi = Mask::parse("0110");
  for (unsigned locus = 1; locus <= 4; ++locus) {
    const auto th = theme_transmission(mask_crossover(psi), schema_map(4, {locus}));
    for (std::size_t l = 0; l < 2; ++l)
      for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t k = 0; k < 2; ++k) {
          const std::size_t source = psi.from_second(locus) ? m : l;
          CHECK(th(k, Parents{l, m}) == (k == source ? 1.0 : 0.0));
        }
  }
}

TEST_CASE("crossover from mask distributions") {
  const auto point = crossover_from_mask_distribution(3, Distribution::point(IndexedSet(8), 0));
  for (std::size_t y = 0; y < 8; ++y)
    for (std::size_t z = 0; z < 8; ++z) CHECK(point(y, Parents{y, z}) == 1.0);
  CHECK_THROWS_AS(crossover_from_mask_distribution(3, Distribution::uniform(IndexedSet(4))),
                  DimensionError);
  std::mt19937_64 rng(32);
  for (unsigned length = 1; length <= 4; ++length) {
    const auto q = oracle::random_distribution(std::size_t{1} << length, rng);
    std::map<std::size_t, double> masks;
    for (std::size_t m = 0; m < q.size(); ++m) masks[m] = q[m];
    const auto t = crossover_from_mask_distribution(length, Distribution(IndexedSet(q.size()), q));
    CHECK(crossover_oracle_gap(t, length, masks) < 1e-14);
  }
}

TEST_CASE("uniform crossover") {
  for (unsigned length = 1; length <= 5; ++length)
    CHECK(crossover_oracle_gap(uniform_crossover(length), length, oracle::uniform_masks(length)) <
          1e-14);
  // Factorization under a schema map at length 4: one factor per defined locus.
  const auto th = theme_transmission(uniform_crossover(4), schema_map(4, {1, 4}));
  for (std::size_t l = 0; l < 4; ++l)
    for (std::size_t m = 0; m < 4; ++m)
      for (std::size_t k = 0; k < 4; ++k) {
        double expected = 1.0;
        for (unsigned bit = 0; bit < 2; ++bit) {
          const auto kb = (k >> bit) & 1U, lb = (l >> bit) & 1U, mb = (m >> bit) & 1U;
          expected *= lb != mb ? 0.5 : (kb == lb ? 1.0 : 0.0);
        }
        CHECK(th(k, Parents{l, m}) == doctest::Approx(expected));
      }
}

TEST_CASE("n-point crossover") {
  CHECK_THROWS_AS(n_point_mask_distribution(3, 3), ArgumentError);
  const auto one = n_point_mask_distribution(3, 1);
  CHECK(one[from_bits("011")] == doctest::Approx(0.5));
  CHECK(one[from_bits("001")] == doctest::Approx(0.5));
  const auto two = n_point_mask_distribution(4, 2);
  CHECK(two[from_bits("0110")] == doctest::Approx(1.0 / 3));
  CHECK(two[from_bits("0100")] == doctest::Approx(1.0 / 3));
  CHECK(two[from_bits("0010")] == doctest::Approx(1.0 / 3));
  for (unsigned length = 2; length <= 7; ++length)
    for (unsigned points = 0; points < length; ++points) {
      const auto expected = oracle::n_point_masks(length, points);
      const auto q = n_point_mask_distribution(length, points);
      for (std::size_t m = 0; m < q.size(); ++m) {
        const auto it = expected.find(m);
        CHECK(q[m] == doctest::Approx(it == expected.end() ? 0.0 : it->second).epsilon(1e-14));
      }
    }
  for (unsigned length = 2; length <= 4; ++length)
    CHECK(crossover_oracle_gap(n_point_crossover(length, 1), length,
                               oracle::n_point_masks(length, 1)) < 1e-14);
}

TEST_CASE("property: structural variation agrees with enumeration") {
  std::mt19937_64 rng(33);
  for (unsigned length = 1; length <= 5; ++length) {
    const std::size_t n = std::size_t{1} << length;
    std::vector<TransmissionFunction> ops{canonical_mutation(length, 0.13), uniform_crossover(length)};
    if (length >= 2) ops.push_back(n_point_crossover(length, 1));
    if (length >= 3) ops.push_back(n_point_crossover(length, 2));
    for (const auto& t : ops) {
      CHECK(t.has_structural_variation());
      for (int s = 0; s < 5; ++s) {
        const auto p = oracle::random_distribution(n, rng);
        const Distribution d(IndexedSet(n), p);
        const auto fast = as_vector(apply_variation(t, d));
        const auto slow = oracle::variation(n, t.arity(),
                                            [&](std::size_t x, const Parents& ps) { return t(x, ps); }, p);
        CHECK(oracle::max_abs_diff(fast, slow) < 1e-12);
      }
    }
  }
}

TEST_CASE("projected closed forms") {
  const double a = 0.3;
  const auto pm1 = projected_mutation(a, 1);
  CHECK(pm1(0, Parents{0}) == doctest::Approx(1 - a));
  CHECK(pm1(1, Parents{0}) == doctest::Approx(a));
  CHECK(projected_mutation(0.1, 2)(0b00, Parents{0b11}) == doctest::Approx(0.01));
  const auto px1 = projected_uniform_crossover(1);
  CHECK(px1(1, Parents{1, 1}) == 1.0);
  CHECK(px1(0, Parents{0, 0}) == 1.0);
  const auto px2 = projected_uniform_crossover(2);
  for (std::size_t k = 0; k < 4; ++k) CHECK(px2(k, Parents{0b00, 0b11}) == doctest::Approx(0.25));
  for (const auto& s : all_schema_maps(6, 2)) {
    if (s.order() != 2) continue;
    CHECK(table_gap(projected_mutation(0.1, 2), theme_transmission(canonical_mutation(6, 0.1), s)) <
          1e-12);
    CHECK(table_gap(projected_uniform_crossover(2), theme_transmission(uniform_crossover(6), s)) <
          1e-12);
  }
  for (const auto& s : all_schema_maps(5, 3)) {
    for (unsigned points = 1; points <= 2; ++points) {
      const auto q = n_point_mask_distribution(5, points);
      CHECK(table_gap(projected_mask_crossover(5, q, s),
                      theme_transmission(n_point_crossover(5, points), s)) < 1e-12);
    }
  }
}

TEST_CASE("property: every operator is ambivalent under every schema map") {
  for (unsigned length = 1; length <= 5; ++length) {
    std::vector<TransmissionFunction> ops{canonical_mutation(length, 0.01),
                                          canonical_mutation(length, 0.5),
                                          uniform_crossover(length)};
    for (unsigned points = 1; points < length && points <= 2; ++points)
      ops.push_back(n_point_crossover(length, points));
    ops.push_back(compose(canonical_mutation(length, 0.2), uniform_crossover(length)));
    ops.push_back(compose(uniform_crossover(length), canonical_mutation(length, 0.2)));
    for (const auto& s : all_schema_maps(length, length))
      for (const auto& t : ops) CHECK(is_ambivalent(t, s));
  }
}
