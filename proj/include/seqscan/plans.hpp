#pragma once

#include "seqscan/stats_core.hpp"
#include "seqscan/stopping_plan.hpp"

namespace seqscan {

// Stopping plan of the KL-threshold test, bounded by its own n_max. Labels
// come from a precomputed BoundaryTable.
StoppingPlan new_test_plan(const TestSpec& spec, const TunedParams& params);

// Same with an explicit table size (n_max >= 1).
StoppingPlan new_test_plan(const TestSpec& spec, const TunedParams& params, int n_max);

}  // namespace seqscan
