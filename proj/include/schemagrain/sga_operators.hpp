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

#ifndef SCHEMAGRAIN_SGA_OPERATORS_HPP_
#define SCHEMAGRAIN_SGA_OPERATORS_HPP_

// Bitstring genome sets and the variation operators of the simple GA.
//
// Bit order: locus 1 is the most significant bit of a genome's dense index,
// so genome 0b110 on three loci has loci (1,1,0) and renders as "110".
// Masks use the same convention; a 1 at locus i means the child takes
// locus i from the second parent.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "schemagrain/distribution.hpp"
#include "schemagrain/transmission.hpp"

namespace schemagrain {

/// Longest genome for which operators over B_l are built.
inline constexpr unsigned kMaxGenomeLength = 20;

/// The set of all bitstrings of a fixed length.
class BitstringSet {
 public:
  explicit BitstringSet(unsigned length);

  unsigned length() const noexcept { return length_; }
  std::size_t size() const noexcept { return std::size_t{1} << length_; }
  IndexedSet indexed_set() const { return IndexedSet(size()); }

 private:
  unsigned length_;
};

/// Bit of the dense index holding `locus` (1-based) of a length-`length` string.
constexpr std::size_t locus_bit(unsigned length, unsigned locus) {
  return std::size_t{1} << (length - locus);
}

std::string to_bits(std::size_t genome, unsigned length);
/// Parses a string of '0'/'1' characters; throws ArgumentError otherwise.
std::size_t from_bits(std::string_view bits);

/// The theme map sending a genome to its values at a set of defined loci.
class SchemaMap {
 public:
  unsigned length() const noexcept { return length_; }
  /// Defined loci, 1-based and strictly increasing.
  const std::vector<unsigned>& loci() const noexcept { return loci_; }
  unsigned order() const noexcept { return unsigned(loci_.size()); }

  const ThemeMap& theme_map() const noexcept { return map_; }
  operator const ThemeMap&() const noexcept { return map_; }  // NOLINT
  std::size_t operator()(std::size_t genome) const { return map_(genome); }

 private:
  friend SchemaMap schema_map(unsigned, std::vector<unsigned>);
  SchemaMap(unsigned length, std::vector<unsigned> loci, ThemeMap map)
      : length_(length), loci_(std::move(loci)), map_(std::move(map)) {}

  unsigned length_;
  std::vector<unsigned> loci_;
  ThemeMap map_;
};

/// Throws ArgumentError if `loci` is empty, unsorted, repeats, or leaves 1..length.
SchemaMap schema_map(unsigned length, std::vector<unsigned> loci);

/// Every schema map on B_length of order 1..max_order.
std::vector<SchemaMap> all_schema_maps(unsigned length, unsigned max_order);

/// A crossover mask over `length` loci.
class Mask {
 public:
  Mask(unsigned length, std::size_t bits);
  static Mask parse(std::string_view bits);

  unsigned length() const noexcept { return length_; }
  std::size_t bits() const noexcept { return bits_; }
  bool from_second(unsigned locus) const { return bits_ & locus_bit(length_, locus); }

 private:
  unsigned length_;
  std::size_t bits_;
};

/// Flips every bit independently with probability `rate`.
TransmissionFunction canonical_mutation(unsigned length, double rate);

/// Deterministic two-parent crossover driven by a single mask.
TransmissionFunction mask_crossover(const Mask& mask);

/// sum over masks psi of q(psi) times the mask crossover for psi. `masks`
/// must be a distribution over B_length.
TransmissionFunction crossover_from_mask_distribution(unsigned length, const Distribution& masks);

/// Each child locus comes from either parent with probability 1/2.
TransmissionFunction uniform_crossover(unsigned length);

Distribution uniform_mask_distribution(unsigned length);

/// Masks for `points`-point crossover: uniform over the C(length-1, points)
/// sets of cut points between adjacent loci, starting from the first parent.
Distribution n_point_mask_distribution(unsigned length, unsigned points);

TransmissionFunction n_point_crossover(unsigned length, unsigned points);

/// Theme transmission of canonical mutation under any schema map of the
/// given order, as a product of per-locus 2x2 terms.
ThemeTransmission projected_mutation(double rate, unsigned order);

/// Theme transmission of uniform crossover under any schema map of the
/// given order: each defined locus copies either parent's bit with
/// probability 1/2.
ThemeTransmission projected_uniform_crossover(unsigned order);

/// Theme transmission of a mask-distribution crossover under `schema`: the
/// mask distribution marginalized onto the defined loci, acting on B_order.
ThemeTransmission projected_mask_crossover(unsigned length, const Distribution& masks,
                                           const SchemaMap& schema);

}  // namespace schemagrain

#endif  // SCHEMAGRAIN_SGA_OPERATORS_HPP_
