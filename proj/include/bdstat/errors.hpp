#pragma once

#include <stdexcept>
#include <string>

namespace bdstat {

// Parameter outside its admissible region. The message names the violated bound.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// The ratio series 1 + sum(lambda_0...lambda_i) diverges, so no stationary law exists.
class NonExistenceError : public std::runtime_error {
 public:
  explicit NonExistenceError(const std::string& what) : std::runtime_error(what) {}
};

// A series hit SeriesPolicy::max_terms before meeting its tolerance.
class SeriesCapError : public std::runtime_error {
 public:
  explicit SeriesCapError(const std::string& what) : std::runtime_error(what) {}
};

// Operation not defined for this family (e.g. canonical form of Poisson-Lindley).
class UnsupportedFamilyError : public std::invalid_argument {
 public:
  explicit UnsupportedFamilyError(const std::string& what) : std::invalid_argument(what) {}
};

// Runtime guard tripped during simulation.
class StateExplosionError : public std::runtime_error {
 public:
  explicit StateExplosionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bdstat
