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

#include "schemagrain/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "schemagrain/errors.hpp"

namespace schemagrain {

EvolutionMachine::EvolutionMachine(TransmissionFunction transmission, FitnessFunction fitness)
    : transmission_(std::move(transmission)), fitness_(std::move(fitness)) {
  if (!(transmission_.base() == fitness_.base()))
    throw DimensionError("evolution machine: transmission and fitness are over different sets");
  if (transmission_.size() > kMaxMachineSize)
    throw CapacityError("evolution machine over " + std::to_string(transmission_.size()) +
                        " genomes exceeds the exact-iteration limit of " +
                        std::to_string(kMaxMachineSize) +
                        "; use the finite-population model for longer genomes");
}

Distribution epoch(const EvolutionMachine& machine, const Distribution& p) {
  return apply_variation(machine.transmission(), select(machine.fitness(), p));
}

double Trajectory::max_normalization_correction() const {
  double worst = 0.0;
  for (double c : normalization_corrections) worst = std::max(worst, c);
  return worst;
}

Trajectory trajectory(const EvolutionMachine& machine, const Distribution& p0,
                      std::size_t generations) {
  if (!(p0.base() == machine.genome_set()))
    throw DimensionError("trajectory: initial distribution is not over the genome set");
  Trajectory out;
  out.generations.reserve(generations + 1);
  out.generations.push_back(p0);
  out.normalization_corrections.push_back(0.0);
  for (std::size_t t = 0; t < generations; ++t) {
    Distribution selected = [&] {
      try {
        return select(machine.fitness(), out.generations.back());
      } catch (const DegenerateSelectionError& e) {
        throw e.at_generation(t);
      }
    }();
    Distribution next = apply_variation(machine.transmission(), selected);
    std::vector<double> mass(next.mass().begin(), next.mass().end());
    const double correction = renormalize(mass);
    out.normalization_corrections.push_back(correction);
    out.generations.emplace_back(next.base(), std::move(mass));
  }
  return out;
}

namespace {

void check_quotient_inputs(const EvolutionMachine& machine, const ThemeMap& beta,
                           const FitnessFunction& theme_fitness) {
  if (!(beta.domain() == machine.genome_set()))
    throw DimensionError("quotient_machine: theme map is not over the machine's genome set");
  if (!(theme_fitness.base() == beta.codomain()))
    throw DimensionError("quotient_machine: theme fitness is not over the theme set");
}

}  // namespace

EvolutionMachine quotient_machine(const EvolutionMachine& machine, const ThemeMap& beta,
                                  const FitnessFunction& theme_fitness) {
  check_quotient_inputs(machine, beta, theme_fitness);
  return EvolutionMachine(theme_transmission(machine.transmission(), beta), theme_fitness);
}

EvolutionMachine quotient_machine(const EvolutionMachine& machine, const ThemeMap& beta,
                                  const FitnessFunction& theme_fitness,
                                  const ThemeTransmission& known) {
  check_quotient_inputs(machine, beta, theme_fitness);
  if (!(known.base() == beta.codomain()) || known.arity() != machine.transmission().arity())
    throw DimensionError("quotient_machine: theme transmission does not match the theme set");
  return EvolutionMachine(known, theme_fitness);
}

double thematic_mean_divergence(const FitnessFunction& fitness,
                                const FitnessFunction& theme_fitness, const ThemeMap& beta,
                                const Distribution& p) {
  if (!(fitness.base() == beta.domain()) || !(p.base() == beta.domain()))
    throw DimensionError("thematic_mean_divergence: fitness or distribution not over the domain");
  if (!(theme_fitness.base() == beta.codomain()))
    throw DimensionError("thematic_mean_divergence: theme fitness not over the theme set");
  double worst = 0.0;
  for (std::size_t k = 0; k < beta.codomain().size(); ++k) {
    double mass = 0.0;
    double weighted = 0.0;
    for (std::size_t x : beta.theme_class(k)) {
      mass += p[x];
      weighted += fitness[x] * p[x];
    }
    if (mass == 0.0) continue;
    worst = std::max(worst, std::abs(weighted / mass - theme_fitness[k]));
  }
  return worst;
}

double departure_monitor(const ThemeMap& beta, const Distribution& p) {
  if (!(p.base() == beta.domain()))
    throw DimensionError("departure_monitor: distribution not over the theme map's domain");
  double worst = 0.0;
  for (std::size_t k = 0; k < beta.codomain().size(); ++k) {
    const auto members = beta.theme_class(k);
    double mass = 0.0;
    for (std::size_t x : members) mass += p[x];
    if (mass == 0.0) continue;
    const double uniform = 1.0 / double(members.size());
    double d = 0.0;
    for (std::size_t x : members) d += std::abs(p[x] / mass - uniform);
    worst = std::max(worst, d);
  }
  return worst;
}

double CoarseGrainReport::max_distance() const {
  double worst = 0.0;
  for (double d : distances) worst = std::max(worst, d);
  return worst;
}

CoarseGrainReport coarse_graining_error(const EvolutionMachine& fine,
                                        const EvolutionMachine& coarse, const ThemeMap& beta,
                                        const Distribution& p0, std::size_t generations) {
  if (generations < 1) throw ArgumentError("coarse_graining_error needs at least one generation");
  if (!(beta.domain() == fine.genome_set()) || !(beta.codomain() == coarse.genome_set()))
    throw DimensionError("coarse_graining_error: machines are not related by the theme map");
  CoarseGrainReport report;
  report.fine = trajectory(fine, p0, generations);
  report.coarse = trajectory(coarse, project(beta, p0), generations);
  report.thematic_mean_divergence = thematic_mean_divergence(
      fine.fitness(), coarse.fitness(), beta, Distribution::uniform(fine.genome_set()));
  for (std::size_t t = 0; t <= generations; ++t) {
    const Distribution& p = report.fine.generations[t];
    report.distances.push_back(manhattan(project(beta, p), report.coarse.generations[t]));
    report.departure.push_back(departure_monitor(beta, p));
    report.thematic_mean_divergence =
        std::max(report.thematic_mean_divergence,
                 thematic_mean_divergence(fine.fitness(), coarse.fitness(), beta, p));
    if (t < generations)
      report.departure_after_selection.push_back(
          departure_monitor(beta, select(fine.fitness(), p)));
  }
  return report;
}

FitnessFunction schematic_fitness(const SchemaMap& schema, std::span<const double> theme_fitness,
                                  double noise_sd, std::uint64_t seed, double floor) {
  const ThemeMap& beta = schema.theme_map();
  if (theme_fitness.size() != beta.codomain().size())
    throw DimensionError("schematic_fitness: one theme fitness per theme is required");
  if (!(noise_sd >= 0.0)) throw ArgumentError("schematic_fitness: noise_sd must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(beta.domain().size());
  for (std::size_t x = 0; x < values.size(); ++x)
    values[x] = std::max(floor, theme_fitness[beta(x)] + noise_sd * normal(rng));
  return FitnessFunction(beta.domain(), std::move(values));
}

FitnessFunction pull_back(const ThemeMap& beta, const FitnessFunction& theme_fitness) {
  if (!(theme_fitness.base() == beta.codomain()))
    throw DimensionError("pull_back: theme fitness not over the theme set");
  std::vector<double> values(beta.domain().size());
  for (std::size_t x = 0; x < values.size(); ++x) values[x] = theme_fitness[beta(x)];
  return FitnessFunction(beta.domain(), std::move(values));
}

}  // namespace schemagrain
