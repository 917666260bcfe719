#include "seqscan/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "seqscan/errors.hpp"
#include "seqscan/oc_eval.hpp"
#include "seqscan/plans.hpp"

namespace seqscan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double budget_ratio(double budget, double risk) { return risk > 0.0 ? budget / risk : kInf; }

// R >= 1 at (a, b, zeta); candidates outside zeta*a, zeta*b < 1 are infeasible.
struct Candidate {
  bool feasible = false;
  RiskRatios ratios{0.0, 0.0};
};

Candidate try_candidate(const TestSpec& spec, double a, double b, double zeta, int& evaluations) {
  if (!(zeta * a < 1.0 && zeta * b < 1.0)) return {};
  ++evaluations;
  const RiskRatios r = risk_ratios(spec, TunedParams(a, b, zeta));
  return {r.R() >= 1.0, r};
}

void fill(TuneDiagnostics& diag, const RiskRatios& r) {
  diag.A = r.A;
  diag.B = r.B;
  diag.Q = r.Q();
  diag.R = r.R();
}

}  // namespace

double RiskRatios::Q() const { return std::max(A, B); }
double RiskRatios::R() const { return std::min(A, B); }

DesignRisks risks_at_design_points(const TestSpec& spec, const TunedParams& params) {
  const StoppingPlan plan = new_test_plan(spec, params);
  const OcReport at_p0 = evaluate(plan, spec.p0());
  const OcReport at_p1 = evaluate(plan, spec.p1());
  return {at_p0.accept_prob(Decision::benign), at_p1.accept_prob(Decision::scanner)};
}

RiskRatios risk_ratios(const TestSpec& spec, const TunedParams& params) {
  const DesignRisks risks = risks_at_design_points(spec, params);
  return {budget_ratio(spec.alpha(), risks.reject_h0_at_p0), budget_ratio(spec.beta(), risks.reject_h1_at_p1)};
}

void TuneDiagnostics::write_trace_csv(std::ostream& os) const {
  os << "k,a,b,zeta_star,A,B,Q\n" << std::setprecision(12);
  for (const TuneIterate& it : trace) {
    os << it.k << ',' << it.a << ',' << it.b << ',' << it.zeta_star << ',' << it.A << ',' << it.B << ','
       << it.Q << '\n';
  }
}

ZetaSearch bisect_zeta(const TestSpec& spec, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("bisect_zeta requires a, b > 0");
  TuneDiagnostics diag;
  double lo = 0.0;
  RiskRatios at_lo{0.0, 0.0};
  for (int i = 0; i <= kZetaScanMaxExponent; ++i) {
    const double zeta = std::ldexp(1.0, -i);
    const Candidate c = try_candidate(spec, a, b, zeta, diag.evaluations);
    if (c.feasible) {
      lo = zeta;
      at_lo = c.ratios;
      break;
    }
  }
  if (lo == 0.0) {
    throw InfeasibleTuning("R < 1 for every zeta down to 2^-" + std::to_string(kZetaScanMaxExponent) +
                           " with a=" + std::to_string(a) + " b=" + std::to_string(b));
  }
  double hi = 2.0 * lo;
  bool hi_tested = false;
  for (int it = 0; it < kZetaMaxBisections && hi - lo > kZetaRelativeTolerance * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Candidate c = try_candidate(spec, a, b, mid, diag.evaluations);
    if (c.feasible) {
      lo = mid;
      at_lo = c.ratios;
    } else {
      hi = mid;
      hi_tested = true;
    }
  }
  fill(diag, at_lo);
  return {lo, hi, hi_tested, diag};
}

std::pair<TunedParams, TuneDiagnostics> minimax_tune(const TestSpec& spec, int k_max,
                                                     const MinimaxOptions& options) {
  if (k_max < 1) throw std::invalid_argument("minimax_tune requires k_max >= 1");
  TuneDiagnostics diag;
  double a = spec.alpha();
  double b = spec.beta();
  double q_hat = kInf;
  double best_a = 0.0, best_b = 0.0;

  for (int k = 0; k < k_max; ++k) {
    const ZetaSearch search = bisect_zeta(spec, a, b);
    diag.evaluations += search.diagnostics.evaluations;
    const double zeta = search.zeta_star;
    const double A = search.diagnostics.A;
    const double B = search.diagnostics.B;
    const double Q = search.diagnostics.Q;
    diag.trace.push_back({k, a, b, zeta, A, B, Q});

    if (Q < q_hat) {
      best_a = zeta * a;
      best_b = zeta * b;
      q_hat = Q;
      diag.A = A;
      diag.B = B;
      diag.Q = Q;
      diag.R = search.diagnostics.R;
    }
    // A zero design-point risk makes Q unbounded; no finite update exists.
    if (!std::isfinite(Q)) break;

    const double tol = options.equality_tolerance * std::max(1.0, Q);
    const bool a_dominant = std::abs(A - Q) <= tol;
    const bool b_dominant = std::abs(B - Q) <= tol;
    const double growth = 1.0 + (Q - 1.0) / 5.0;
    double next_a = options.update == CoefficientUpdate::rescale_both ? zeta * a : a;
    double next_b = options.update == CoefficientUpdate::rescale_both ? zeta * b : b;
    if (a_dominant) next_a = zeta * a * growth;
    if (b_dominant) next_b = zeta * b * growth;
    a = next_a;
    b = next_b;
  }
  if (!std::isfinite(q_hat)) {
    throw InfeasibleTuning("no iterate attained a finite Q; a design-point risk is zero");
  }
  return {TunedParams(best_a, best_b, 1.0), diag};
}

}  // namespace seqscan
