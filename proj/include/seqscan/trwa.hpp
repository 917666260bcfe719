#pragma once

#include "seqscan/decision.hpp"
#include "seqscan/stats_core.hpp"
#include "seqscan/stopping_plan.hpp"

namespace seqscan {

// Threshold Random Walk: Wald's SPRT on the likelihood ratio
//   Pr{X_1..X_n | p0} / Pr{X_1..X_n | p1}
// with benign declared at ratio <= k0 and scanner at ratio >= k1.
class TrwaParams {
 public:
  TrwaParams(double k0, double k1);

  // k0 = alpha, k1 = 1/beta.
  static TrwaParams from_spec(const TestSpec& spec);

  double k0() const { return k0_; }
  double k1() const { return k1_; }

 private:
  double k0_, k1_;
};

struct TrwaState {
  int n = 0;
  int s = 0;
  double llr = 0.0;  // log of the probability ratio
  Decision decision = Decision::undecided;

  bool decided() const { return decision != Decision::undecided; }
};

// Log ratio after n observations with s successes, computed from the counts.
double trwa_llr(int successes, int trials, const TestSpec& spec);

Decision trwa_decision(int successes, int trials, const TrwaParams& params, const TestSpec& spec);

// Throws std::logic_error if `state` is already decided.
TrwaState trwa_step(const TrwaState& state, bool success, const TrwaParams& params,
                    const TestSpec& spec);

inline constexpr int kTrwaDefaultHorizon = 1'000'000;
inline constexpr double kTrwaDefaultMassCutoff = 1e-12;

StoppingPlan trwa_plan(const TestSpec& spec, const TrwaParams& params,
                       int horizon = kTrwaDefaultHorizon,
                       double mass_cutoff = kTrwaDefaultMassCutoff);

// Quantile of the stop time at success rate p; q = 0 gives 1.
int trwa_stop_time_quantile(const TestSpec& spec, const TrwaParams& params, double p, double q,
                            int horizon = kTrwaDefaultHorizon);

}  // namespace seqscan
