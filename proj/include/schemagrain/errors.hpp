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

#ifndef SCHEMAGRAIN_ERRORS_HPP_
#define SCHEMAGRAIN_ERRORS_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace schemagrain {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on incompatible index sets, or have mismatched lengths/arities.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter is outside its documented domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed the supported size (memory or enumeration budget).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or command-line input.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing experiment files failed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Fitness-proportional selection on a population with zero total fitness.
class DegenerateSelectionError : public Error {
 public:
  explicit DegenerateSelectionError(std::optional<std::size_t> generation = std::nullopt);

  /// Generation whose selection step collapsed, when known.
  const std::optional<std::size_t>& generation() const noexcept { return generation_; }

  DegenerateSelectionError at_generation(std::size_t generation) const {
    return DegenerateSelectionError(generation);
  }

 private:
  std::optional<std::size_t> generation_;
};

/// Witness that a transmission function is not ambivalent under a theme map:
/// two parent tuples drawn from the same theme classes send different mass
/// into theme class `child_theme`.
struct AmbivalenceWitness {
  std::size_t child_theme = 0;
  std::vector<std::size_t> parent_themes;
  std::vector<std::size_t> first_parents;
  std::vector<std::size_t> second_parents;
  double first_mass = 0.0;
  double second_mass = 0.0;

  std::string describe() const;
};

class AmbivalenceViolation : public Error {
 public:
  explicit AmbivalenceViolation(AmbivalenceWitness witness);

  const AmbivalenceWitness& witness() const noexcept { return witness_; }

 private:
  AmbivalenceWitness witness_;
};

}  // namespace schemagrain

#endif  // SCHEMAGRAIN_ERRORS_HPP_
