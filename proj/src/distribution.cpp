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

#include "schemagrain/distribution.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "schemagrain/errors.hpp"

namespace schemagrain {

DegenerateSelectionError::DegenerateSelectionError(std::optional<std::size_t> generation)
    : Error(generation ? "degenerate selection: total fitness is zero at generation " +
                             std::to_string(*generation)
                       : std::string("degenerate selection: total fitness is zero")),
      generation_(generation) {}

namespace {

std::string tuple_text(const std::vector<std::size_t>& v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << ')';
  return out.str();
}

}  // namespace

std::string AmbivalenceWitness::describe() const {
  std::ostringstream out;
  out << "theme " << child_theme << " given parent themes " << tuple_text(parent_themes)
      << ": parents " << tuple_text(first_parents) << " give mass " << first_mass
      << " but parents " << tuple_text(second_parents) << " give mass " << second_mass;
  return out.str();
}

AmbivalenceViolation::AmbivalenceViolation(AmbivalenceWitness witness)
    : Error("transmission function is not ambivalent: " + witness.describe()),
      witness_(std::move(witness)) {}

IndexedSet::IndexedSet(std::size_t size) : size_(size) {
  if (size == 0) throw ArgumentError("indexed set must have at least one element");
}

IndexedSet::IndexedSet(std::size_t size, std::vector<std::string> labels)
    : IndexedSet(size) {
  if (labels.size() != size) throw DimensionError("label count does not match set size");
  labels_ = std::move(labels);
}

std::string IndexedSet::label(std::size_t i) const {
  return labels_.empty() ? std::to_string(i) : labels_.at(i);
}

Distribution::Distribution(IndexedSet base, std::vector<double> mass)
    : base_(std::move(base)), mass_(std::move(mass)) {
  if (mass_.size() != base_.size())
    throw DimensionError("distribution has " + std::to_string(mass_.size()) +
                         " entries over a set of size " + std::to_string(base_.size()));
  bool all_zero = true;
  for (double m : mass_) {
    if (!(m >= 0.0 && m <= 1.0 + kNormalizationTolerance))
      throw ArgumentError("distribution entry outside [0,1]: " + std::to_string(m));
    if (m != 0.0) all_zero = false;
  }
  zero_ = all_zero;
  if (!zero_) {
    const double sum = total();
    if (std::abs(sum - 1.0) > kNormalizationTolerance)
      throw ArgumentError("distribution sums to " + std::to_string(sum));
  }
}

Distribution Distribution::uniform(const IndexedSet& base) {
  return Distribution(base, std::vector<double>(base.size(), 1.0 / double(base.size())));
}

Distribution Distribution::point(const IndexedSet& base, std::size_t index) {
  if (index >= base.size()) throw ArgumentError("point mass index out of range");
  std::vector<double> mass(base.size(), 0.0);
  mass[index] = 1.0;
  return Distribution(base, std::move(mass));
}

Distribution Distribution::zero(const IndexedSet& base) {
  return Distribution(base, std::vector<double>(base.size(), 0.0));
}

double Distribution::total() const noexcept {
  return std::accumulate(mass_.begin(), mass_.end(), 0.0);
}

FitnessFunction::FitnessFunction(IndexedSet base, std::vector<double> values)
    : base_(std::move(base)), values_(std::move(values)) {
  if (values_.size() != base_.size())
    throw DimensionError("fitness function has " + std::to_string(values_.size()) +
                         " values over a set of size " + std::to_string(base_.size()));
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ArgumentError("fitness values must be finite and nonnegative");
}

FitnessFunction FitnessFunction::constant(const IndexedSet& base, double value) {
  return FitnessFunction(base, std::vector<double>(base.size(), value));
}

ThemeMap::ThemeMap(IndexedSet domain, IndexedSet codomain, std::vector<std::size_t> assignment)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      assignment_(std::move(assignment)),
      classes_(codomain_.size()) {
  if (assignment_.size() != domain_.size())
    throw DimensionError("theme map assignment does not cover its domain");
  for (std::size_t x = 0; x < assignment_.size(); ++x) {
    if (assignment_[x] >= codomain_.size())
      throw ArgumentError("theme map assigns element " + std::to_string(x) +
                          " outside the theme set");
    classes_[assignment_[x]].push_back(x);
  }
  for (std::size_t k = 0; k < classes_.size(); ++k)
    if (classes_[k].empty())
      throw ArgumentError("theme map is not surjective: theme " + std::to_string(k) +
                          " has an empty class");
}

ThemeMap ThemeMap::identity(const IndexedSet& base) {
  std::vector<std::size_t> assignment(base.size());
  std::iota(assignment.begin(), assignment.end(), std::size_t{0});
  return ThemeMap(base, base, std::move(assignment));
}

double expectation(const FitnessFunction& f, const Distribution& p) {
  if (!(f.base() == p.base())) throw DimensionError("expectation: base sets differ");
  double sum = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) sum += f[x] * p[x];
  return sum;
}

Distribution select(const FitnessFunction& f, const Distribution& p) {
  const double mean = expectation(f, p);
  if (!(mean > 0.0)) throw DegenerateSelectionError();
  std::vector<double> out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) out[x] = f[x] * p[x] / mean;
  return Distribution(p.base(), std::move(out));
}

Distribution project(const ThemeMap& beta, const Distribution& p) {
  if (!(beta.domain() == p.base())) throw DimensionError("project: distribution is not over the theme map's domain");
  std::vector<double> out(beta.codomain().size(), 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) out[beta(x)] += p[x];
  return Distribution(beta.codomain(), std::move(out));
}

Distribution theme_conditional(const ThemeMap& beta, const Distribution& p, std::size_t k) {
  if (!(beta.domain() == p.base()))
    throw DimensionError("theme_conditional: distribution is not over the theme map's domain");
  if (k >= beta.codomain().size()) throw DimensionError("theme_conditional: theme out of range");
  std::vector<double> out(p.size(), 0.0);
  double class_mass = 0.0;
  for (std::size_t x : beta.theme_class(k)) class_mass += p[x];
  if (class_mass > 0.0)
    for (std::size_t x : beta.theme_class(k)) out[x] = p[x] / class_mass;
  return Distribution(p.base(), std::move(out));
}

double manhattan(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("manhattan: lengths differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

double manhattan(const Distribution& a, const Distribution& b) {
  return manhattan(a.mass(), b.mass());
}

double renormalize(std::vector<double>& mass, double threshold) {
  const double sum = std::accumulate(mass.begin(), mass.end(), 0.0);
  const double correction = std::abs(sum - 1.0);
  if (correction <= threshold || !(sum > 0.0)) return 0.0;
  for (double& m : mass) m /= sum;
  return correction;
}

}  // namespace schemagrain
