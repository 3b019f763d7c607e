#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kreinspec {

// Base for every failure raised by the library. The CLI maps subclasses to
// process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DomainError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, long dimension)
      : Error(what + " (dimension " + std::to_string(dimension) + ")"),
        dimension_(dimension) {}
  long dimension() const noexcept { return dimension_; }

 private:
  long dimension_;
};

// Rank filtration came out non-monotone or inconsistent with the cluster
// size; usually the rank threshold needs adjusting.
class DegenerateThreshold : public Error {
 public:
  using Error::Error;
};

// Branch continuation moved an eigenvalue further than the jump bound between
// two consecutive parameter samples.
class StepRefinementRequired : public Error {
 public:
  StepRefinementRequired(const std::string& what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_, hi_;
};

// A bisection predicate was not monotone inside its bracket.
class AmbiguousBracket : public Error {
 public:
  AmbiguousBracket(const std::string& what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_, hi_;
};

// More exceptional points interleave than the triple-point search can
// disambiguate. Carries the primary-parameter locations involved.
class Ambiguity : public Error {
 public:
  Ambiguity(const std::string& what, std::vector<double> locations)
      : Error(what), locations_(std::move(locations)) {}
  const std::vector<double>& locations() const noexcept { return locations_; }

 private:
  std::vector<double> locations_;
};

}  // namespace kreinspec
