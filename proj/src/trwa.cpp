#include "seqscan/trwa.hpp"

#include <cmath>
#include <stdexcept>

#include "seqscan/oc_eval.hpp"

namespace seqscan {

TrwaParams::TrwaParams(double k0, double k1) : k0_(k0), k1_(k1) {
  if (!(k0 > 0.0 && k0 < 1.0 && k1 > 1.0 && std::isfinite(k1))) {
    throw std::invalid_argument("TrwaParams requires 0 < k0 < 1 < k1");
  }
}

TrwaParams TrwaParams::from_spec(const TestSpec& spec) { return TrwaParams(spec.alpha(), 1.0 / spec.beta()); }

double trwa_llr(int successes, int trials, const TestSpec& spec) {
  const double on_success = std::log(spec.p0() / spec.p1());
  const double on_failure = std::log((1.0 - spec.p0()) / (1.0 - spec.p1()));
  return successes * on_success + (trials - successes) * on_failure;
}

Decision trwa_decision(int successes, int trials, const TrwaParams& params, const TestSpec& spec) {
  const double llr = trwa_llr(successes, trials, spec);
  if (llr <= std::log(params.k0())) return Decision::benign;
  if (llr >= std::log(params.k1())) return Decision::scanner;
  return Decision::undecided;
}

TrwaState trwa_step(const TrwaState& state, bool success, const TrwaParams& params,
                    const TestSpec& spec) {
  if (state.decided()) throw std::logic_error("trwa_step() on a decided state");
  TrwaState next = state;
  next.n += 1;
  next.s += success ? 1 : 0;
  next.llr = trwa_llr(next.s, next.n, spec);
  next.decision = trwa_decision(next.s, next.n, params, spec);
  return next;
}

StoppingPlan trwa_plan(const TestSpec& spec, const TrwaParams& params, int horizon, double mass_cutoff) {
  const double on_success = std::log(spec.p0() / spec.p1());
  const double on_failure = std::log((1.0 - spec.p0()) / (1.0 - spec.p1()));
  const double lower = std::log(params.k0());
  const double upper = std::log(params.k1());
  return StoppingPlan(
      "trwa",
      [=](int n, int s) {
        const double llr = s * on_success + (n - s) * on_failure;
        if (llr <= lower) return Decision::benign;
        if (llr >= upper) return Decision::scanner;
        return Decision::undecided;
      },
      horizon, {Decision::scanner, Decision::benign}, mass_cutoff);
}

int trwa_stop_time_quantile(const TestSpec& spec, const TrwaParams& params, double p, double q, int horizon) {
  return stop_time_quantile(trwa_plan(spec, params, horizon, 0.0), p, q);
}

}  // namespace seqscan
