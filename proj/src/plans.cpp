#include "seqscan/plans.hpp"

#include <memory>
#include <stdexcept>
#include <string>

#include "seqscan/maxobs.hpp"

namespace seqscan {

StoppingPlan new_test_plan(const TestSpec& spec, const TunedParams& params) {
  const int n_max = solve_max_obs(spec, params).n_max;
  StoppingPlan plan = new_test_plan(spec, params, n_max);
  // Every cell of the final row must stop; otherwise the bound is wrong.
  for (int s = 0; s <= n_max; ++s) {
    if (plan.label(n_max, s) == Decision::undecided) {
      throw std::logic_error("observation bound " + std::to_string(n_max) +
                             " leaves an undecided cell at s=" + std::to_string(s));
    }
  }
  return plan;
}

StoppingPlan new_test_plan(const TestSpec& spec, const TunedParams& params, int n_max) {
  auto table = std::make_shared<const BoundaryTable>(build_boundary_table(spec, params, n_max));
  return StoppingPlan(
      "new", [table](int n, int s) { return table->lookup(n, s); }, n_max,
      {Decision::scanner, Decision::benign});
}

}  // namespace seqscan
