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

#include "schemagrain/sga_operators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <string>

#include "schemagrain/errors.hpp"

namespace schemagrain {

namespace {

void require_length(unsigned length) {
  if (length < 1 || length > kMaxGenomeLength)
    throw ArgumentError("genome length must be in 1.." + std::to_string(kMaxGenomeLength) +
                        ", got " + std::to_string(length));
}

// Weighted masks with the population-level crossover evaluated as a sum of
// products of marginals: for a fixed mask the child's loci from parent one
// and from parent two are independent draws from the population.
struct WeightedMasks {
  unsigned length;
  std::vector<std::size_t> masks;
  std::vector<double> weights;

  void vary(std::span<const double> p, std::span<double> out) const {
    const std::size_t n = std::size_t{1} << length;
    const std::size_t full = n - 1;
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> first(n);
    std::vector<double> second(n);
    for (std::size_t i = 0; i < masks.size(); ++i) {
      const std::size_t psi = masks[i];
      const std::size_t keep = full & ~psi;
      std::fill(first.begin(), first.end(), 0.0);
      std::fill(second.begin(), second.end(), 0.0);
      for (std::size_t y = 0; y < n; ++y) {
        first[y & keep] += p[y];
        second[y & psi] += p[y];
      }
      const double w = weights[i];
      for (std::size_t x = 0; x < n; ++x) out[x] += w * first[x & keep] * second[x & psi];
    }
  }
};

TransmissionFunction from_weighted_masks(std::shared_ptr<const WeightedMasks> wm) {
  const std::size_t n = std::size_t{1} << wm->length;
  auto child = [wm](std::span<const std::size_t> parents, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t y = parents[0];
    const std::size_t z = parents[1];
    for (std::size_t i = 0; i < wm->masks.size(); ++i) {
      const std::size_t psi = wm->masks[i];
      out[(y & ~psi) | (z & psi)] += wm->weights[i];
    }
  };
  auto variation = [wm](std::span<const double> p, std::span<double> out) { wm->vary(p, out); };
  return TransmissionFunction(IndexedSet(n), 2, std::move(child), std::move(variation));
}

std::shared_ptr<const WeightedMasks> support_of(unsigned length, const Distribution& masks) {
  auto wm = std::make_shared<WeightedMasks>();
  wm->length = length;
  for (std::size_t psi = 0; psi < masks.size(); ++psi) {
    if (masks[psi] == 0.0) continue;
    wm->masks.push_back(psi);
    wm->weights.push_back(masks[psi]);
  }
  return wm;
}

}  // namespace

BitstringSet::BitstringSet(unsigned length) : length_(length) { require_length(length); }

std::string to_bits(std::size_t genome, unsigned length) {
  std::string out(length, '0');
  for (unsigned locus = 1; locus <= length; ++locus)
    if (genome & locus_bit(length, locus)) out[locus - 1] = '1';
  return out;
}

std::size_t from_bits(std::string_view bits) {
  if (bits.empty() || bits.size() > 63) throw ArgumentError("bitstring must have 1..63 characters");
  std::size_t value = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ArgumentError("bitstring contains a character other than 0/1");
    value = (value << 1) | std::size_t(c == '1');
  }
  return value;
}

SchemaMap schema_map(unsigned length, std::vector<unsigned> loci) {
  require_length(length);
  if (loci.empty()) throw ArgumentError("schema map needs at least one defined locus");
  for (std::size_t i = 0; i < loci.size(); ++i) {
    if (loci[i] < 1 || loci[i] > length)
      throw ArgumentError("schema locus " + std::to_string(loci[i]) + " outside 1.." +
                          std::to_string(length));
    if (i > 0 && loci[i] <= loci[i - 1])
      throw ArgumentError("schema loci must be strictly increasing");
  }
  const std::size_t n = std::size_t{1} << length;
  const unsigned order = unsigned(loci.size());
  std::vector<std::size_t> assignment(n);
  for (std::size_t g = 0; g < n; ++g) {
    std::size_t theme = 0;
    for (unsigned locus : loci) theme = (theme << 1) | std::size_t((g & locus_bit(length, locus)) != 0);
    assignment[g] = theme;
  }
  ThemeMap map(IndexedSet(n), IndexedSet(std::size_t{1} << order), std::move(assignment));
  return SchemaMap(length, std::move(loci), std::move(map));
}

std::vector<SchemaMap> all_schema_maps(unsigned length, unsigned max_order) {
  require_length(length);
  std::vector<SchemaMap> out;
  for (std::size_t subset = 1; subset < (std::size_t{1} << length); ++subset) {
    if (unsigned(std::popcount(subset)) > max_order) continue;
    std::vector<unsigned> loci;
    for (unsigned locus = 1; locus <= length; ++locus)
      if (subset & locus_bit(length, locus)) loci.push_back(locus);
    out.push_back(schema_map(length, std::move(loci)));
  }
  return out;
}

Mask::Mask(unsigned length, std::size_t bits) : length_(length), bits_(bits) {
  require_length(length);
  if (bits >> length) throw ArgumentError("mask has bits beyond its length");
}

Mask Mask::parse(std::string_view bits) {
  return Mask(unsigned(bits.size()), from_bits(bits));
}

TransmissionFunction canonical_mutation(unsigned length, double rate) {
  require_length(length);
  if (!(rate >= 0.0 && rate <= 1.0)) throw ArgumentError("mutation rate must be in [0,1]");
  const std::size_t n = std::size_t{1} << length;
  // probability[h]: a child at Hamming distance h from its parent.
  std::vector<double> probability(length + 1);
  for (unsigned h = 0; h <= length; ++h)
    probability[h] = std::pow(rate, double(h)) * std::pow(1.0 - rate, double(length - h));
  auto child = [probability](std::span<const std::size_t> parents, std::span<double> out) {
    for (std::size_t x = 0; x < out.size(); ++x)
      out[x] = probability[std::popcount(x ^ parents[0])];
  };
  auto variation = [length, rate, n](std::span<const double> p, std::span<double> out) {
    std::copy(p.begin(), p.end(), out.begin());
    for (unsigned locus = 1; locus <= length; ++locus) {
      const std::size_t bit = locus_bit(length, locus);
      for (std::size_t x = 0; x < n; ++x) {
        if (x & bit) continue;
        const double a = out[x];
        const double b = out[x | bit];
        out[x] = (1.0 - rate) * a + rate * b;
        out[x | bit] = rate * a + (1.0 - rate) * b;
      }
    }
  };
  return TransmissionFunction(IndexedSet(n), 1, std::move(child), std::move(variation));
}

TransmissionFunction mask_crossover(const Mask& mask) {
  auto wm = std::make_shared<WeightedMasks>();
  wm->length = mask.length();
  wm->masks = {mask.bits()};
  wm->weights = {1.0};
  return from_weighted_masks(std::move(wm));
}

TransmissionFunction crossover_from_mask_distribution(unsigned length, const Distribution& masks) {
  require_length(length);
  if (masks.size() != (std::size_t{1} << length))
    throw DimensionError("mask distribution is not over masks of length " +
                         std::to_string(length));
  if (masks.is_zero()) throw ArgumentError("mask distribution must be normalized");
  return from_weighted_masks(support_of(length, masks));
}

TransmissionFunction uniform_crossover(unsigned length) {
  require_length(length);
  const std::size_t n = std::size_t{1} << length;
  // Per locus: agreeing parents fix the child's bit, disagreeing parents
  // give each value probability 1/2.
  auto child = [](std::span<const std::size_t> parents, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t differ = parents[0] ^ parents[1];
    const std::size_t fixed = parents[0] & ~differ;
    const double mass = std::ldexp(1.0, -std::popcount(differ));
    std::size_t sub = differ;
    while (true) {
      out[fixed | sub] = mass;
      if (sub == 0) break;
      sub = (sub - 1) & differ;
    }
  };
  auto wm = support_of(length, uniform_mask_distribution(length));
  auto variation = [wm](std::span<const double> p, std::span<double> out) { wm->vary(p, out); };
  return TransmissionFunction(IndexedSet(n), 2, std::move(child), std::move(variation));
}

Distribution uniform_mask_distribution(unsigned length) {
  require_length(length);
  return Distribution::uniform(IndexedSet(std::size_t{1} << length));
}

Distribution n_point_mask_distribution(unsigned length, unsigned points) {
  require_length(length);
  if (points > length - 1)
    throw ArgumentError(std::to_string(points) + "-point crossover needs more than " +
                        std::to_string(length) + " loci");
  const std::size_t n = std::size_t{1} << length;
  std::vector<double> mass(n, 0.0);
  // Cut point c (1..length-1) sits between loci c and c+1. Each subset of
  // cut points of the right size yields one mask.
  std::size_t count = 0;
  const std::size_t cuts = std::size_t{1} << (length - 1);
  for (std::size_t subset = 0; subset < cuts; ++subset) {
    if (unsigned(std::popcount(subset)) != points) continue;
    std::size_t mask = 0;
    bool second = false;
    for (unsigned locus = 1; locus <= length; ++locus) {
      if (second) mask |= locus_bit(length, locus);
      if (locus < length && (subset >> (locus - 1)) & 1U) second = !second;
    }
    mass[mask] += 1.0;
    ++count;
  }
  for (double& m : mass) m /= double(count);
  return Distribution(IndexedSet(n), std::move(mass));
}

TransmissionFunction n_point_crossover(unsigned length, unsigned points) {
  return crossover_from_mask_distribution(length, n_point_mask_distribution(length, points));
}

// The induced operators on B_order have the same per-locus structure as the
// fine ones, so they are built directly on the theme set.
ThemeTransmission projected_mutation(double rate, unsigned order) {
  return ThemeTransmission(canonical_mutation(order, rate));
}

ThemeTransmission projected_uniform_crossover(unsigned order) {
  return ThemeTransmission(uniform_crossover(order));
}

ThemeTransmission projected_mask_crossover(unsigned length, const Distribution& masks,
                                           const SchemaMap& schema) {
  if (schema.length() != length) throw DimensionError("schema map length differs from mask length");
  if (masks.size() != (std::size_t{1} << length))
    throw DimensionError("mask distribution is not over masks of length " +
                         std::to_string(length));
  const Distribution marginal = project(schema.theme_map(), masks);
  return ThemeTransmission(crossover_from_mask_distribution(schema.order(), marginal));
}

}  // namespace schemagrain
