#pragma once

#include "seqscan/stats_core.hpp"

namespace seqscan {

// Hard bound on the number of observations of the KL-threshold test.
//
// The continuation region at step m closes where the two curves
//   ((1-p0)/(1-z))^(1-z) (p0/z)^z = (zeta*a)^(1/m)
//   ((1-p1)/(1-z))^(1-z) (p1/z)^z = (zeta*b)^(1/m)
// meet at a common abscissa z* in (p0, p1). Eliminating m gives a scalar
// equation in z; m* follows from the first curve and n_max = floor(m*) + 1.
struct MaxObsResult {
  double z_star;
  double m_star;
  int n_max;
};

// General case: bisection for z* on (p0, p1).
MaxObsResult solve_max_obs(const TestSpec& spec, const TunedParams& params);

// a = b special case with z* in closed form.
MaxObsResult closed_form_max_obs(const TestSpec& spec, double zeta_a);

}  // namespace seqscan
