#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "seqscan/decision.hpp"
#include "seqscan/stats_core.hpp"
#include "seqscan/stopping_plan.hpp"

namespace seqscan {

// Exact operating characteristics of a stopping plan at a fixed p.
struct OcReport {
  double p = 0.0;
  std::array<double, kDecisionCount> accept{};  // indexed by Decision
  std::vector<double> stop_dist;                // stop_dist[n] = Pr{stop exactly at n}; [0] unused
  double asn = 0.0;                             // E[min(T, last_step)]
  double residual_mass = 0.0;                   // Pr{not stopped by last_step}
  int last_step = 0;                            // last n propagated

  double accept_prob(Decision d) const { return accept[index(d)]; }
  double total_accept() const;
};

// Forward recursion over the (n, s) lattice. Mass in continue cells splits to
// (n+1, s+1) with probability p and to (n+1, s) with 1-p; mass entering a
// decision cell is banked. Stops at the plan horizon, or earlier when the
// continuing mass falls below the plan's mass cutoff.
OcReport evaluate(const StoppingPlan& plan, double p);

inline constexpr int kBruteForceMaxHorizon = 20;

// Independent oracle: enumerates all 2^horizon outcome sequences and applies
// the plan sequentially to each. Throws std::invalid_argument when
// horizon > kBruteForceMaxHorizon.
OcReport brute_force_oc(const StoppingPlan& plan, double p);

// Smallest n with Pr{T <= n | p} >= q. Throws HorizonExceeded if the plan
// horizon is exhausted first.
int stop_time_quantile(const StoppingPlan& plan, double p, double q);

struct RiskPoint {
  double p;
  double risk;
  bool unspecified;  // p in (p0, p1): no requirement, risk reported as 0
};

// Pr{benign | p} for p <= p0, Pr{scanner | p} for p >= p1.
std::vector<RiskPoint> risk_curve(const StoppingPlan& plan, const TestSpec& spec,
                                  std::span<const double> p_grid);

struct AsnRatioPoint {
  double p;
  double asn_a;
  double asn_b;
  double ratio;
  double residual_a;
  double residual_b;
};

std::vector<AsnRatioPoint> asn_ratio_curve(const StoppingPlan& plan_a, const StoppingPlan& plan_b,
                                           std::span<const double> p_grid);

// Evenly spaced grid lo, lo+step, ... up to hi (inclusive within step/2).
std::vector<double> make_grid(double lo, double hi, double step);

// `p,accept_scanner,accept_benign,asn,residual`, or with an extra
// accept_marginal column when the plan can decide `marginal`.
void write_oc_csv(std::ostream& os, const StoppingPlan& plan, std::span<const OcReport> reports);
void write_stop_dist_csv(std::ostream& os, const OcReport& report);

}  // namespace seqscan
