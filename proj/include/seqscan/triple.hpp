#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "seqscan/decision.hpp"
#include "seqscan/stats_core.hpp"
#include "seqscan/stopping_plan.hpp"

namespace seqscan {

// Three-way classification H0: p <= p0 (scanner), H1: p0 < p < p1
// (marginal), H2: p >= p1 (benign), with indifference zones (p0_lo, p0_hi)
// and (p1_lo, p1_hi) where no error requirement applies.
struct TripleSpec {
  double p0, p1;
  double p0_lo, p0_hi, p1_lo, p1_hi;
  double delta0, delta1, delta2;

  // Throws std::invalid_argument unless
  // 0 < p0_lo < p0 < p0_hi < p1_lo < p1 < p1_hi < 1 and each delta in (0, 1).
  void validate() const;

  // The hypothesis whose region contains p.
  Decision truth(double p) const;
  bool in_indifference_zone(double p) const;
  // Requirement at p, or 0 inside an indifference zone.
  double budget(double p) const;
};

struct TripleOptions {
  int k_max = 20;              // minimax iterations per sub-test
  int max_delta1_halvings = 6;
  int check_grid_points = 200;
};

struct SubTest {
  TestSpec spec;
  TunedParams params;
  int n_max;
};

struct TriplePlan {
  StoppingPlan plan;
  SubTest lower;  // thresholds (p0_lo, p0_hi), budgets (delta0, delta1')
  SubTest upper;  // thresholds (p1_lo, p1_hi), budgets (delta1', delta2)
  int delta1_halvings = 0;
  long conflict_cells = 0;  // cells where lower says scanner and upper says benign
  double max_risk_excess = 0.0;  // max over the check grid of risk - budget
};

// Composes two tuned binary tests: accept H0 where the lower test accepts
// its lower hypothesis, H2 where the upper test accepts its upper hypothesis,
// H1 where the lower test accepts upper and the upper test accepts lower.
// Verifies the three risk requirements exactly on a grid; on failure delta1
// is halved for both sub-tests and they are re-tuned. Throws
// InfeasibleTuning if the requirements still fail.
TriplePlan build_triple_plan(const TripleSpec& spec, const TripleOptions& options = {});

struct TripleRiskPoint {
  double p;
  double risk;            // Pr{accepting a hypothesis whose region excludes p}
  bool indifference;      // no requirement applies at p
  Decision truth;
};

std::vector<TripleRiskPoint> triple_risk_curve(const StoppingPlan& plan, const TripleSpec& spec,
                                               std::span<const double> p_grid);

// Grid used for the compliance check: `points` evenly spaced points of (0, 1),
// minus those inside an indifference zone, plus the four zone endpoints.
std::vector<double> triple_check_grid(const TripleSpec& spec, int points);

// `n,s,label` for every lattice cell up to the plan horizon.
void write_region_csv(std::ostream& os, const StoppingPlan& plan);

}  // namespace seqscan
