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

#ifndef SCHEMAGRAIN_TRANSMISSION_HPP_
#define SCHEMAGRAIN_TRANSMISSION_HPP_

// m-parent transmission functions, the variation operator they induce, and
// the algebra used to combine them and certify ambivalence under theme maps.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "schemagrain/distribution.hpp"
#include "schemagrain/errors.hpp"

namespace schemagrain {

/// Default tolerance when certifying ambivalence or independence numerically.
inline constexpr double kAmbivalenceTolerance = 1e-9;

/// Largest number of table entries (size^(arity+1)) a transmission function
/// will be materialized into.
inline constexpr std::size_t kDenseBudget = std::size_t{1} << 24;

/// An m-parent transmission function T(x | x_1..x_m) over a finite set.
///
/// The function is defined by a kernel that writes the whole child
/// distribution for a tuple of parents. Operators with known structure may
/// also supply a population-level kernel that evaluates the variation
/// operator directly; apply_variation prefers it, apply_variation_exhaustive
/// never uses it. Instances are immutable and cheap to copy.
class TransmissionFunction {
 public:
  /// Overwrites `child` with T(. | parents).
  using ChildKernel =
      std::function<void(std::span<const std::size_t> parents, std::span<double> child)>;
  /// Overwrites `out` with the variation operator applied to `p`.
  using VariationKernel = std::function<void(std::span<const double> p, std::span<double> out)>;

  TransmissionFunction(IndexedSet base, std::size_t arity, ChildKernel child,
                       VariationKernel variation = {});

  /// Dense table with parent tuples in lexicographic order (first parent most
  /// significant) and the child index varying fastest. Each row must be a
  /// distribution within kNormalizationTolerance.
  static TransmissionFunction from_table(IndexedSet base, std::size_t arity,
                                         std::vector<double> table);

  /// The one-parent identity: the child is a copy of its parent.
  static TransmissionFunction clone(const IndexedSet& base);

  const IndexedSet& base() const noexcept { return state_->base; }
  std::size_t size() const noexcept { return state_->base.size(); }
  std::size_t arity() const noexcept { return state_->arity; }

  double operator()(std::size_t child, std::span<const std::size_t> parents) const;
  std::vector<double> child_distribution(std::span<const std::size_t> parents) const;
  void child_distribution(std::span<const std::size_t> parents, std::span<double> out) const;

  bool has_structural_variation() const noexcept { return bool(state_->variation); }
  const VariationKernel& structural_variation() const noexcept { return state_->variation; }

  bool is_dense() const noexcept { return !state_->table.empty(); }
  std::span<const double> table() const noexcept { return state_->table; }

  /// Number of parent tuples, size^arity. Throws CapacityError on overflow.
  std::size_t parent_tuple_count() const;

  /// Dense copy of this function. The structural kernel, if any, is kept.
  /// Throws CapacityError if size^(arity+1) exceeds `budget`.
  TransmissionFunction materialized(std::size_t budget = kDenseBudget) const;

 private:
  struct State {
    IndexedSet base;
    std::size_t arity;
    ChildKernel child;
    VariationKernel variation;
    std::vector<double> table;
  };
  explicit TransmissionFunction(std::shared_ptr<const State> state) : state_(std::move(state)) {}

  std::shared_ptr<const State> state_;
};

/// A transmission function over a theme set, induced by an ambivalent
/// transmission function over the genome set.
class ThemeTransmission : public TransmissionFunction {
 public:
  explicit ThemeTransmission(TransmissionFunction t) : TransmissionFunction(std::move(t)) {}
};

/// Calls `visit(parents)` for every parent tuple of `arity` elements drawn
/// from a set of `size` elements, in lexicographic order.
void for_each_parent_tuple(std::size_t size, std::size_t arity,
                           const std::function<void(std::span<const std::size_t>)>& visit);

/// Largest |sum_x T(x|parents) - 1| over all parent tuples.
double max_normalization_error(const TransmissionFunction& t);

/// The variation operator: (V_T p)(x) = sum over parent tuples of
/// T(x|x_1..x_m) p(x_1)...p(x_m). Uses the structural kernel when present.
Distribution apply_variation(const TransmissionFunction& t, const Distribution& p);

/// The variation operator evaluated by enumerating every parent tuple.
Distribution apply_variation_exhaustive(const TransmissionFunction& t, const Distribution& p);

/// (T1 o T2)(x|y_1..y_n) = sum over x_1..x_m of T1(x|x_1..x_m) prod_i T2(x_i|y_1..y_n):
/// T2 produces m intermediates from the same parents, T1 recombines them.
TransmissionFunction compose(const TransmissionFunction& outer, const TransmissionFunction& inner);

/// Pointwise convex combination sum_i weights(i) T_i.
TransmissionFunction weighted_sum(const Distribution& weights,
                                  std::span<const TransmissionFunction> parts);

/// Exhaustive search for a pair of parent tuples with matching themes whose
/// children fall into some theme class with different probabilities.
std::optional<AmbivalenceWitness> find_ambivalence_violation(
    const TransmissionFunction& t, const ThemeMap& beta, double tol = kAmbivalenceTolerance);

bool is_ambivalent(const TransmissionFunction& t, const ThemeMap& beta,
                   double tol = kAmbivalenceTolerance);

/// The induced transmission function over beta's theme set. Certifies
/// ambivalence exhaustively and throws AmbivalenceViolation on failure.
ThemeTransmission theme_transmission(const TransmissionFunction& t, const ThemeMap& beta,
                                     double tol = kAmbivalenceTolerance);

/// beta_1 x ... x beta_n. Themes are tuples indexed lexicographically with
/// the first map most significant; tuples that no element maps to are
/// dropped and the remaining ones renumbered in increasing order.
ThemeMap cartesian_product(std::span<const ThemeMap> maps);

/// True iff for every parent tuple the child's mass in every intersection of
/// theme classes equals the product of its masses in the individual classes.
bool are_independent(const TransmissionFunction& t, std::span<const ThemeMap> maps,
                     double tol = kAmbivalenceTolerance);

}  // namespace schemagrain

#endif  // SCHEMAGRAIN_TRANSMISSION_HPP_
