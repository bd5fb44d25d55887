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

#ifndef SCHEMAGRAIN_EVOLUTION_HPP_
#define SCHEMAGRAIN_EVOLUTION_HPP_

// Infinite-population evolution machines and tools for measuring how well
// a quotient machine over a theme set shadows the projected fine dynamics.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "schemagrain/distribution.hpp"
#include "schemagrain/sga_operators.hpp"
#include "schemagrain/transmission.hpp"

namespace schemagrain {

/// Largest genome set an evolution machine is iterated on exactly (2^16).
/// Larger schema-level studies belong to the finite-population model.
inline constexpr std::size_t kMaxMachineSize = std::size_t{1} << 16;

/// A genome set, a transmission function, and a fitness function sharing it.
class EvolutionMachine {
 public:
  /// Throws DimensionError if the bases differ, CapacityError above kMaxMachineSize.
  EvolutionMachine(TransmissionFunction transmission, FitnessFunction fitness);

  const IndexedSet& genome_set() const noexcept { return transmission_.base(); }
  const TransmissionFunction& transmission() const noexcept { return transmission_; }
  const FitnessFunction& fitness() const noexcept { return fitness_; }

 private:
  TransmissionFunction transmission_;
  FitnessFunction fitness_;
};

/// One generation: selection followed by variation.
Distribution epoch(const EvolutionMachine& machine, const Distribution& p);

struct Trajectory {
  /// generations[t] is the distribution after t epochs.
  std::vector<Distribution> generations;
  /// Renormalization applied to each generation (0 for generation 0 and
  /// whenever |sum - 1| stayed within 1e-12).
  std::vector<double> normalization_corrections;

  double max_normalization_correction() const;
};

/// Iterates `epoch` for `generations` steps. A degenerate selection is
/// rethrown with the generation it occurred in.
Trajectory trajectory(const EvolutionMachine& machine, const Distribution& p0,
                      std::size_t generations);

/// The machine over beta's theme set with the extracted theme transmission
/// (certified exhaustively) and fitness `theme_fitness`.
EvolutionMachine quotient_machine(const EvolutionMachine& machine, const ThemeMap& beta,
                                  const FitnessFunction& theme_fitness);

/// As above with a theme transmission known in closed form, e.g. from
/// projected_uniform_crossover. The caller vouches for its correctness.
EvolutionMachine quotient_machine(const EvolutionMachine& machine, const ThemeMap& beta,
                                  const FitnessFunction& theme_fitness,
                                  const ThemeTransmission& known);

/// max over themes k with positive mass of
/// |E_f(C_beta(p, k)) - f*(k)|.
double thematic_mean_divergence(const FitnessFunction& fitness,
                                const FitnessFunction& theme_fitness, const ThemeMap& beta,
                                const Distribution& p);

/// max over themes k with positive mass of the manhattan distance between
/// C_beta(p, k) and the uniform distribution on k's theme class.
double departure_monitor(const ThemeMap& beta, const Distribution& p);

struct CoarseGrainReport {
  /// distances[t] = d(project(fine_t), coarse_t) for t = 0..generations.
  std::vector<double> distances;
  /// Largest thematic mean divergence over the uniform distribution and
  /// every distribution along the fine trajectory.
  double thematic_mean_divergence = 0.0;
  /// departure[t]: departure_monitor of fine generation t.
  std::vector<double> departure;
  /// departure_after_selection[t]: departure_monitor of select(f, fine_t),
  /// for t = 0..generations-1.
  std::vector<double> departure_after_selection;
  Trajectory fine;
  Trajectory coarse;

  double max_distance() const;
};

CoarseGrainReport coarse_graining_error(const EvolutionMachine& fine,
                                        const EvolutionMachine& coarse, const ThemeMap& beta,
                                        const Distribution& p0, std::size_t generations);

/// Fitness over B_length whose values on the class of each theme k are
/// independent draws from N(theme_fitness[k], noise_sd^2), floored at
/// `floor` so the result stays positive.
FitnessFunction schematic_fitness(const SchemaMap& schema, std::span<const double> theme_fitness,
                                  double noise_sd, std::uint64_t seed, double floor = 1e-6);

/// The fitness f*(beta(x)) pulled back to the domain of beta.
FitnessFunction pull_back(const ThemeMap& beta, const FitnessFunction& theme_fitness);

}  // namespace schemagrain

#endif  // SCHEMAGRAIN_EVOLUTION_HPP_
