#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dzo {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad sizes, shapes, or out-of-range parameters.
class InvalidArgument : public Error {
  using Error::Error;
};

/// Randomized construction exhausted its retry budget.
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, int attempts)
      : Error(what), attempts(attempts) {}
  int attempts;
};

/// A function query returned a non-finite value.
class EvaluationError : public Error {
  using Error::Error;
};

/// An iterate became non-finite. Carries the offending agent and iteration.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int agent, std::int64_t iteration)
      : Error(what), agent(agent), iteration(iteration) {}
  int agent;
  std::int64_t iteration;
};

/// Invalid run configuration. `keys` lists the offending entries.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::vector<std::string> keys = {})
      : Error(what), keys(std::move(keys)) {}
  std::vector<std::string> keys;
};

}  // namespace dzo
