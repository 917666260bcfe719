#pragma once

#include <stdexcept>
#include <string>

namespace seqscan {

// Base for all errors raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI error objects.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidPlan : public Error {
 public:
  explicit InvalidPlan(const std::string& what) : Error("invalid_plan", what) {}
};

class HorizonExceeded : public Error {
 public:
  HorizonExceeded(const std::string& what, double stopped_mass)
      : Error("horizon_exceeded", what), stopped_mass_(stopped_mass) {}
  // Probability of having stopped by the time the horizon was exhausted.
  double stopped_mass() const noexcept { return stopped_mass_; }

 private:
  double stopped_mass_;
};

class InfeasibleTuning : public Error {
 public:
  explicit InfeasibleTuning(const std::string& what) : Error("infeasible_tuning", what) {}
};

class NoCrossing : public Error {
 public:
  explicit NoCrossing(const std::string& what) : Error("no_crossing", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("invalid_config", what) {}
};

class MalformedEvent : public Error {
 public:
  explicit MalformedEvent(const std::string& what) : Error("malformed_event", what) {}
};

}  // namespace seqscan
