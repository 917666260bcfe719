#include "seqscan/stopping_plan.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "seqscan/errors.hpp"

namespace seqscan {

StoppingPlan::StoppingPlan(std::string name, Rule rule, int horizon, std::vector<Decision> outcomes,
                           double mass_cutoff)
    : name_(std::move(name)),
      rule_(std::make_shared<const Rule>(std::move(rule))),
      horizon_(horizon),
      outcomes_(std::move(outcomes)),
      mass_cutoff_(mass_cutoff) {
  if (!*rule_) throw InvalidPlan("stopping plan '" + name_ + "' has no rule");
  if (horizon_ < 1) throw InvalidPlan("stopping plan horizon must be >= 1");
  if (outcomes_.empty()) throw InvalidPlan("stopping plan has no terminal outcomes");
  if (std::find(outcomes_.begin(), outcomes_.end(), Decision::undecided) != outcomes_.end()) {
    throw InvalidPlan("'undecided' is not a terminal outcome");
  }
  if (!(mass_cutoff_ >= 0.0 && mass_cutoff_ < 1.0)) {
    throw InvalidPlan("mass cutoff must lie in [0, 1)");
  }
}

Decision StoppingPlan::label(int n, int s) const {
  const Decision d = (*rule_)(n, s);
  if (d != Decision::undecided &&
      std::find(outcomes_.begin(), outcomes_.end(), d) == outcomes_.end()) {
    throw InvalidPlan("plan '" + name_ + "' labels (" + std::to_string(n) + ", " + std::to_string(s) +
                      ") with undeclared outcome '" + std::string(to_string(d)) + "'");
  }
  return d;
}

StoppingPlan StoppingPlan::with_horizon(int horizon) const {
  if (horizon < 1) throw InvalidPlan("stopping plan horizon must be >= 1");
  StoppingPlan copy = *this;
  copy.horizon_ = horizon;
  return copy;
}

StoppingPlan StoppingPlan::with_mass_cutoff(double cutoff) const {
  if (!(cutoff >= 0.0 && cutoff < 1.0)) throw InvalidPlan("mass cutoff must lie in [0, 1)");
  StoppingPlan copy = *this;
  copy.mass_cutoff_ = cutoff;
  return copy;
}

}  // namespace seqscan
