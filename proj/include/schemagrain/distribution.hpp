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

#ifndef SCHEMAGRAIN_DISTRIBUTION_HPP_
#define SCHEMAGRAIN_DISTRIBUTION_HPP_

// Distributions over finite indexed sets, fitness functions, theme maps, and
// the population-level operators that act on them.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace schemagrain {

/// Tolerance used when validating that a mass vector sums to one.
inline constexpr double kNormalizationTolerance = 1e-9;

/// A finite set whose elements are addressed by dense indices 0..size-1.
class IndexedSet {
 public:
  explicit IndexedSet(std::size_t size);
  IndexedSet(std::size_t size, std::vector<std::string> labels);

  std::size_t size() const noexcept { return size_; }
  bool has_labels() const noexcept { return !labels_.empty(); }
  /// Label of element `i`; its decimal index when the set is unlabeled.
  std::string label(std::size_t i) const;

  /// Sets are compatible when they have the same number of elements.
  friend bool operator==(const IndexedSet& a, const IndexedSet& b) noexcept {
    return a.size_ == b.size_;
  }

 private:
  std::size_t size_;
  std::vector<std::string> labels_;
};

/// A probability vector over an IndexedSet, or the all-zero function.
class Distribution {
 public:
  /// Throws ArgumentError unless every entry is in [0,1] and the entries sum
  /// to one (within kNormalizationTolerance) or are all exactly zero.
  Distribution(IndexedSet base, std::vector<double> mass);

  static Distribution uniform(const IndexedSet& base);
  static Distribution point(const IndexedSet& base, std::size_t index);
  static Distribution zero(const IndexedSet& base);

  const IndexedSet& base() const noexcept { return base_; }
  std::size_t size() const noexcept { return mass_.size(); }
  std::span<const double> mass() const noexcept { return mass_; }
  double operator[](std::size_t i) const { return mass_[i]; }

  bool is_zero() const noexcept { return zero_; }
  double total() const noexcept;

 private:
  IndexedSet base_;
  std::vector<double> mass_;
  bool zero_ = false;
};

/// Nonnegative fitness values, one per element of the base set.
class FitnessFunction {
 public:
  FitnessFunction(IndexedSet base, std::vector<double> values);

  static FitnessFunction constant(const IndexedSet& base, double value);

  const IndexedSet& base() const noexcept { return base_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  IndexedSet base_;
  std::vector<double> values_;
};

/// Surjective map from a domain set onto a theme set. The pre-image of a
/// theme is its theme class.
class ThemeMap {
 public:
  /// Throws ArgumentError if an assignment is out of range or some theme has
  /// an empty class, DimensionError if `assignment` does not cover `domain`.
  ThemeMap(IndexedSet domain, IndexedSet codomain, std::vector<std::size_t> assignment);

  static ThemeMap identity(const IndexedSet& base);

  const IndexedSet& domain() const noexcept { return domain_; }
  const IndexedSet& codomain() const noexcept { return codomain_; }
  std::span<const std::size_t> assignment() const noexcept { return assignment_; }
  std::size_t operator()(std::size_t x) const { return assignment_[x]; }

  /// Elements of the domain mapped to theme `k`, in increasing index order.
  std::span<const std::size_t> theme_class(std::size_t k) const { return classes_[k]; }

 private:
  IndexedSet domain_;
  IndexedSet codomain_;
  std::vector<std::size_t> assignment_;
  std::vector<std::vector<std::size_t>> classes_;
};

/// Sum of f(x) p(x). Zero for the zero function.
double expectation(const FitnessFunction& f, const Distribution& p);

/// Fitness-proportional selection. Throws DegenerateSelectionError when the
/// expected fitness is zero.
Distribution select(const FitnessFunction& f, const Distribution& p);

/// Pushes `p` forward through `beta`: each theme receives the mass of its class.
Distribution project(const ThemeMap& beta, const Distribution& p);

/// `p` conditioned on membership in the class of theme `k`; the zero
/// function when that class carries no mass.
Distribution theme_conditional(const ThemeMap& beta, const Distribution& p, std::size_t k);

/// Sum of absolute entrywise differences.
double manhattan(std::span<const double> a, std::span<const double> b);
double manhattan(const Distribution& a, const Distribution& b);

/// Rescales `mass` to sum to one when it is off by more than `threshold`.
/// Returns the absolute correction |sum - 1| that was removed (0 if none).
double renormalize(std::vector<double>& mass, double threshold = 1e-12);

}  // namespace schemagrain

#endif  // SCHEMAGRAIN_DISTRIBUTION_HPP_
