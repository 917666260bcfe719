#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "seqscan/decision.hpp"

namespace seqscan {

// Stateless labeling of lattice points (n, s), n >= 1, 0 <= s <= n, as
// continue (Decision::undecided) or a terminal decision. Common currency for
// exact evaluation, simulation, and streaming detection.
//
// `horizon` is the last step evaluated. For bounded tests it is the hard
// observation bound; for the SPRT baseline it is a truncation horizon and
// `mass_cutoff` ends exact evaluation once the continuing mass drops below it.
class StoppingPlan {
 public:
  using Rule = std::function<Decision(int n, int s)>;

  StoppingPlan(std::string name, Rule rule, int horizon, std::vector<Decision> outcomes,
               double mass_cutoff = 0.0);

  const std::string& name() const { return name_; }
  int horizon() const { return horizon_; }
  double mass_cutoff() const { return mass_cutoff_; }
  const std::vector<Decision>& outcomes() const { return outcomes_; }

  // Throws InvalidPlan if the rule yields a label outside `outcomes()`.
  Decision label(int n, int s) const;

  StoppingPlan with_horizon(int horizon) const;
  StoppingPlan with_mass_cutoff(double cutoff) const;

 private:
  std::string name_;
  std::shared_ptr<const Rule> rule_;
  int horizon_;
  std::vector<Decision> outcomes_;
  double mass_cutoff_;
};

}  // namespace seqscan
