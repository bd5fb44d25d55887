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

#include "schemagrain/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace schemagrain {

namespace {

// Upper bound on the work (parent tuples times set size) of any exhaustive
// enumeration performed here.
constexpr std::size_t kEnumerationBudget = std::size_t{1} << 34;

std::size_t checked_power(std::size_t base, std::size_t exponent) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (result > std::numeric_limits<std::size_t>::max() / base)
      throw CapacityError("size^arity overflows");
    result *= base;
  }
  return result;
}

void require_enumerable(const TransmissionFunction& t, const char* what) {
  const std::size_t tuples = t.parent_tuple_count();
  if (tuples > kEnumerationBudget / t.size())
    throw CapacityError(std::string(what) + ": exhaustive enumeration over " +
                        std::to_string(tuples) + " parent tuples exceeds the budget");
}

// The variation operator written into `out`.
void vary(const TransmissionFunction& t, std::span<const double> p, std::span<double> out,
          bool allow_structural) {
  if (allow_structural && t.has_structural_variation()) {
    t.structural_variation()(p, out);
    return;
  }
  require_enumerable(t, "apply_variation");
  const std::size_t n = t.size();
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> child(n);
  const auto table = t.table();
  std::size_t row = 0;
  for_each_parent_tuple(n, t.arity(), [&](std::span<const std::size_t> parents) {
    const std::size_t this_row = row++;
    double weight = 1.0;
    for (std::size_t x : parents) weight *= p[x];
    if (weight == 0.0) return;
    if (!table.empty()) {
      const double* r = table.data() + this_row * n;
      for (std::size_t x = 0; x < n; ++x) out[x] += weight * r[x];
    } else {
      t.child_distribution(parents, child);
      for (std::size_t x = 0; x < n; ++x) out[x] += weight * child[x];
    }
  });
}

Distribution checked_variation(const TransmissionFunction& t, const Distribution& p,
                               bool allow_structural) {
  if (!(t.base() == p.base())) throw DimensionError("apply_variation: base sets differ");
  std::vector<double> out(p.size());
  vary(t, p.mass(), out, allow_structural);
  return Distribution(p.base(), std::move(out));
}

std::vector<std::size_t> to_vector(std::span<const std::size_t> s) {
  return std::vector<std::size_t>(s.begin(), s.end());
}

}  // namespace

TransmissionFunction::TransmissionFunction(IndexedSet base, std::size_t arity, ChildKernel child,
                                           VariationKernel variation)
    : state_(std::make_shared<const State>(
          State{std::move(base), arity, std::move(child), std::move(variation), {}})) {
  if (arity == 0) throw ArgumentError("transmission function arity must be at least 1");
  if (!state_->child) throw ArgumentError("transmission function needs a child kernel");
}

TransmissionFunction TransmissionFunction::from_table(IndexedSet base, std::size_t arity,
                                                      std::vector<double> table) {
  if (arity == 0) throw ArgumentError("transmission function arity must be at least 1");
  const std::size_t n = base.size();
  const std::size_t rows = checked_power(n, arity);
  if (table.size() / n != rows || table.size() % n != 0)
    throw DimensionError("transmission table has the wrong number of entries");
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const double v = table[r * n + x];
      if (!(v >= 0.0 && v <= 1.0 + kNormalizationTolerance))
        throw ArgumentError("transmission table entry outside [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance)
      throw ArgumentError("transmission table row " + std::to_string(r) + " sums to " +
                          std::to_string(sum));
  }
  auto state = std::make_shared<State>(State{std::move(base), arity, {}, {}, std::move(table)});
  const State* raw = state.get();
  state->child = [raw](std::span<const std::size_t> parents, std::span<double> out) {
    const std::size_t size = raw->base.size();
    std::size_t row = 0;
    for (std::size_t x : parents) row = row * size + x;
    std::copy_n(raw->table.begin() + std::ptrdiff_t(row * size), size, out.begin());
  };
  return TransmissionFunction(std::shared_ptr<const State>(std::move(state)));
}

TransmissionFunction TransmissionFunction::clone(const IndexedSet& base) {
  return TransmissionFunction(
      base, 1,
      [](std::span<const std::size_t> parents, std::span<double> child) {
        std::fill(child.begin(), child.end(), 0.0);
        child[parents[0]] = 1.0;
      },
      [](std::span<const double> p, std::span<double> out) {
        std::copy(p.begin(), p.end(), out.begin());
      });
}

double TransmissionFunction::operator()(std::size_t child,
                                        std::span<const std::size_t> parents) const {
  if (parents.size() != arity()) throw DimensionError("wrong number of parents");
  if (child >= size()) throw DimensionError("child index out of range");
  if (is_dense()) {
    std::size_t row = 0;
    for (std::size_t x : parents) row = row * size() + x;
    return state_->table[row * size() + child];
  }
  return child_distribution(parents)[child];
}

std::vector<double> TransmissionFunction::child_distribution(
    std::span<const std::size_t> parents) const {
  std::vector<double> out(size());
  child_distribution(parents, out);
  return out;
}

void TransmissionFunction::child_distribution(std::span<const std::size_t> parents,
                                              std::span<double> out) const {
  if (parents.size() != arity()) throw DimensionError("wrong number of parents");
  if (out.size() != size()) throw DimensionError("child buffer has the wrong size");
  for (std::size_t x : parents)
    if (x >= size()) throw DimensionError("parent index out of range");
  state_->child(parents, out);
}

std::size_t TransmissionFunction::parent_tuple_count() const {
  return checked_power(size(), arity());
}

TransmissionFunction TransmissionFunction::materialized(std::size_t budget) const {
  if (is_dense()) return *this;
  const std::size_t rows = parent_tuple_count();
  if (rows > budget / size())
    throw CapacityError("materialization needs " + std::to_string(rows) + "x" +
                        std::to_string(size()) + " entries, budget is " + std::to_string(budget));
  std::vector<double> table(rows * size());
  std::size_t row = 0;
  for_each_parent_tuple(size(), arity(), [&](std::span<const std::size_t> parents) {
    state_->child(parents, std::span<double>(table.data() + row * size(), size()));
    ++row;
  });
  auto dense = from_table(base(), arity(), std::move(table));
  if (!has_structural_variation()) return dense;
  auto state = std::make_shared<State>(*dense.state_);
  state->variation = state_->variation;
  const State* raw = state.get();
  state->child = [raw](std::span<const std::size_t> parents, std::span<double> out) {
    const std::size_t size = raw->base.size();
    std::size_t r = 0;
    for (std::size_t x : parents) r = r * size + x;
    std::copy_n(raw->table.begin() + std::ptrdiff_t(r * size), size, out.begin());
  };
  return TransmissionFunction(std::shared_ptr<const State>(std::move(state)));
}

void for_each_parent_tuple(std::size_t size, std::size_t arity,
                           const std::function<void(std::span<const std::size_t>)>& visit) {
  std::vector<std::size_t> tuple(arity, 0);
  while (true) {
    visit(tuple);
    std::size_t i = arity;
    while (i > 0) {
      --i;
      if (++tuple[i] < size) break;
      tuple[i] = 0;
      if (i == 0) return;
    }
  }
}

double max_normalization_error(const TransmissionFunction& t) {
  require_enumerable(t, "max_normalization_error");
  double worst = 0.0;
  std::vector<double> child(t.size());
  for_each_parent_tuple(t.size(), t.arity(), [&](std::span<const std::size_t> parents) {
    t.child_distribution(parents, child);
    double sum = 0.0;
    for (double c : child) sum += c;
    worst = std::max(worst, std::abs(sum - 1.0));
  });
  return worst;
}

Distribution apply_variation(const TransmissionFunction& t, const Distribution& p) {
  return checked_variation(t, p, true);
}

Distribution apply_variation_exhaustive(const TransmissionFunction& t, const Distribution& p) {
  return checked_variation(t, p, false);
}

TransmissionFunction compose(const TransmissionFunction& outer, const TransmissionFunction& inner) {
  if (!(outer.base() == inner.base())) throw DimensionError("compose: base sets differ");
  // For fixed parents the intermediates are i.i.d. draws from inner(.|parents),
  // so the composed child distribution is the outer variation operator
  // applied to that distribution.
  TransmissionFunction::ChildKernel child = [outer, inner](std::span<const std::size_t> parents,
                                                           std::span<double> out) {
    const std::vector<double> intermediate = inner.child_distribution(parents);
    vary(outer, intermediate, out, true);
  };
  TransmissionFunction::VariationKernel variation;
  if (outer.arity() == 1) {
    // A single-parent outer operator acts on the whole population produced
    // by the inner one.
    variation = [outer, inner](std::span<const double> p, std::span<double> out) {
      std::vector<double> intermediate(p.size());
      vary(inner, p, intermediate, true);
      vary(outer, intermediate, out, true);
    };
  }
  return TransmissionFunction(inner.base(), inner.arity(), std::move(child), std::move(variation));
}

TransmissionFunction weighted_sum(const Distribution& weights,
                                  std::span<const TransmissionFunction> parts) {
  if (parts.empty()) throw ArgumentError("weighted_sum needs at least one part");
  if (weights.size() != parts.size())
    throw DimensionError("weighted_sum: one weight per part is required");
  if (weights.is_zero()) throw ArgumentError("weighted_sum: weights must be normalized");
  for (const auto& part : parts) {
    if (!(part.base() == parts[0].base())) throw DimensionError("weighted_sum: base sets differ");
    if (part.arity() != parts[0].arity()) throw DimensionError("weighted_sum: arities differ");
  }
  std::vector<double> w(weights.mass().begin(), weights.mass().end());
  std::vector<TransmissionFunction> ts(parts.begin(), parts.end());
  auto child = [w, ts](std::span<const std::size_t> parents, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> buffer(out.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (w[i] == 0.0) continue;
      ts[i].child_distribution(parents, buffer);
      for (std::size_t x = 0; x < out.size(); ++x) out[x] += w[i] * buffer[x];
    }
  };
  // The variation operator is linear in the transmission function.
  auto variation = [w, ts](std::span<const double> p, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> buffer(out.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (w[i] == 0.0) continue;
      vary(ts[i], p, buffer, true);
      for (std::size_t x = 0; x < out.size(); ++x) out[x] += w[i] * buffer[x];
    }
  };
  return TransmissionFunction(parts[0].base(), parts[0].arity(), std::move(child),
                              std::move(variation));
}

namespace {

struct ThemeTable {
  std::vector<double> table;  // theme tuple major, child theme fastest
  std::optional<AmbivalenceWitness> violation;
};

// Projects every child distribution onto the theme set, keeping the first
// representative of each theme tuple and comparing all later ones with it.
ThemeTable extract_theme_table(const TransmissionFunction& t, const ThemeMap& beta, double tol,
                               bool stop_at_violation) {
  if (!(t.base() == beta.domain()))
    throw DimensionError("transmission function is not over the theme map's domain");
  require_enumerable(t, "ambivalence check");
  const std::size_t n = t.size();
  const std::size_t k_size = beta.codomain().size();
  const std::size_t m = t.arity();
  const std::size_t theme_tuples = checked_power(k_size, m);
  if (theme_tuples > kDenseBudget / k_size)
    throw CapacityError("theme transmission table exceeds the dense budget");

  ThemeTable result;
  result.table.assign(theme_tuples * k_size, 0.0);
  std::vector<std::vector<std::size_t>> first(theme_tuples);
  std::vector<double> child(n);
  std::vector<double> projected(k_size);
  std::vector<std::size_t> themes(m);
  std::size_t row = 0;
  for_each_parent_tuple(n, m, [&](std::span<const std::size_t> parents) {
    const std::size_t this_row = row++;
    if (result.violation && stop_at_violation) return;
    std::size_t theme_row = 0;
    for (std::size_t i = 0; i < m; ++i) {
      themes[i] = beta(parents[i]);
      theme_row = theme_row * k_size + themes[i];
    }
    if (t.is_dense()) {
      const auto table = t.table();
      std::copy_n(table.begin() + std::ptrdiff_t(this_row * n), n, child.begin());
    } else {
      t.child_distribution(parents, child);
    }
    std::fill(projected.begin(), projected.end(), 0.0);
    for (std::size_t x = 0; x < n; ++x) projected[beta(x)] += child[x];
    double* stored = result.table.data() + theme_row * k_size;
    if (first[theme_row].empty()) {
      first[theme_row] = to_vector(parents);
      std::copy(projected.begin(), projected.end(), stored);
      return;
    }
    if (result.violation) return;
    for (std::size_t k = 0; k < k_size; ++k) {
      if (std::abs(projected[k] - stored[k]) > tol) {
        result.violation = AmbivalenceWitness{k,        themes,       first[theme_row],
                                              to_vector(parents), stored[k], projected[k]};
        return;
      }
    }
  });
  return result;
}

}  // namespace

std::optional<AmbivalenceWitness> find_ambivalence_violation(const TransmissionFunction& t,
                                                             const ThemeMap& beta, double tol) {
  return extract_theme_table(t, beta, tol, true).violation;
}

bool is_ambivalent(const TransmissionFunction& t, const ThemeMap& beta, double tol) {
  return !find_ambivalence_violation(t, beta, tol).has_value();
}

ThemeTransmission theme_transmission(const TransmissionFunction& t, const ThemeMap& beta,
                                     double tol) {
  ThemeTable extracted = extract_theme_table(t, beta, tol, true);
  if (extracted.violation) throw AmbivalenceViolation(std::move(*extracted.violation));
  return ThemeTransmission(
      TransmissionFunction::from_table(beta.codomain(), t.arity(), std::move(extracted.table)));
}

ThemeMap cartesian_product(std::span<const ThemeMap> maps) {
  if (maps.empty()) throw ArgumentError("cartesian_product needs at least one theme map");
  const IndexedSet& domain = maps[0].domain();
  std::size_t tuple_space = 1;
  for (const auto& map : maps) {
    if (!(map.domain() == domain)) throw DimensionError("cartesian_product: domains differ");
    if (tuple_space > std::numeric_limits<std::size_t>::max() / map.codomain().size())
      throw CapacityError("cartesian_product: tuple space overflows");
    tuple_space *= map.codomain().size();
  }
  std::vector<std::size_t> tuple_index(domain.size());
  for (std::size_t x = 0; x < domain.size(); ++x) {
    std::size_t idx = 0;
    for (const auto& map : maps) idx = idx * map.codomain().size() + map(x);
    tuple_index[x] = idx;
  }
  std::vector<std::size_t> reachable = tuple_index;
  std::sort(reachable.begin(), reachable.end());
  reachable.erase(std::unique(reachable.begin(), reachable.end()), reachable.end());
  std::vector<std::size_t> assignment(domain.size());
  for (std::size_t x = 0; x < domain.size(); ++x)
    assignment[x] = std::size_t(
        std::lower_bound(reachable.begin(), reachable.end(), tuple_index[x]) - reachable.begin());
  return ThemeMap(domain, IndexedSet(reachable.size()), std::move(assignment));
}

bool are_independent(const TransmissionFunction& t, std::span<const ThemeMap> maps, double tol) {
  if (maps.empty()) return true;
  std::size_t tuple_space = 1;
  for (const auto& map : maps) {
    if (!(map.domain() == t.base()))
      throw DimensionError("are_independent: theme map is not over the transmission's base");
    if (tuple_space > kDenseBudget / map.codomain().size())
      throw CapacityError("are_independent: joint theme space exceeds the dense budget");
    tuple_space *= map.codomain().size();
  }
  require_enumerable(t, "are_independent");
  const std::size_t n = t.size();
  std::vector<double> child(n);
  std::vector<double> joint(tuple_space);
  std::vector<std::vector<double>> marginals(maps.size());
  bool independent = true;
  for_each_parent_tuple(n, t.arity(), [&](std::span<const std::size_t> parents) {
    if (!independent) return;
    t.child_distribution(parents, child);
    std::fill(joint.begin(), joint.end(), 0.0);
    for (std::size_t i = 0; i < maps.size(); ++i)
      marginals[i].assign(maps[i].codomain().size(), 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      if (child[x] == 0.0) continue;
      std::size_t idx = 0;
      for (std::size_t i = 0; i < maps.size(); ++i) {
        idx = idx * maps[i].codomain().size() + maps[i](x);
        marginals[i][maps[i](x)] += child[x];
      }
      joint[idx] += child[x];
    }
    for (std::size_t idx = 0; idx < tuple_space && independent; ++idx) {
      double product = 1.0;
      std::size_t rest = idx;
      for (std::size_t i = maps.size(); i-- > 0;) {
        const std::size_t k_size = maps[i].codomain().size();
        product *= marginals[i][rest % k_size];
        rest /= k_size;
      }
      if (std::abs(joint[idx] - product) > tol) independent = false;
    }
  });
  return independent;
}

}  // namespace schemagrain
