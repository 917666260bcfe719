#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "seqscan/decision.hpp"
#include "seqscan/stopping_plan.hpp"

namespace seqscan {

struct SimReport {
  double p = 0.0;
  long runs = 0;
  std::uint64_t seed = 0;
  std::string generator;
  std::array<double, kDecisionCount> decision_freq{};  // undecided = truncated runs
  std::array<double, kDecisionCount> decision_std_err{};
  double mean_stop = 0.0;
  double mean_stop_std_err = 0.0;
  int max_stop = 0;
  long truncated = 0;  // runs that reached the plan horizon undecided
  std::map<double, int> stop_quantiles;

  double freq(Decision d) const { return decision_freq[index(d)]; }
  double std_err(Decision d) const { return decision_std_err[index(d)]; }

  // Single-line JSON object.
  std::string to_json() const;
};

// Each run draws from its own mt19937_64 seeded with
// std::seed_seq{seed_lo, seed_hi, run_lo, run_hi}; success iff the top 53
// bits as a fraction in [0, 1) fall below p. Results do not depend on how
// runs are scheduled across threads.
SimReport simulate(const StoppingPlan& plan, double p, long runs, std::uint64_t seed,
                   unsigned threads = 1);

inline constexpr const char* kGeneratorName = "mt19937_64/seed_seq(seed,run)";

}  // namespace seqscan
