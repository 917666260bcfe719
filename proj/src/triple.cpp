#include "seqscan/triple.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>
#include <stdexcept>

#include "seqscan/errors.hpp"
#include "seqscan/maxobs.hpp"
#include "seqscan/oc_eval.hpp"
#include "seqscan/tuner.hpp"

namespace seqscan {

namespace {

bool in_unit(double x) { return x > 0.0 && x < 1.0; }

SubTest tune_subtest(double lo, double hi, double alpha, double beta, int k_max) {
  const TestSpec spec(lo, hi, alpha, beta);
  const TunedParams params = minimax_tune(spec, k_max).first;
  return {spec, params, solve_max_obs(spec, params).n_max};
}

struct Composite {
  StoppingPlan plan;
  long conflicts;
};

Composite compose(const SubTest& lower, const SubTest& upper) {
  const int horizon = std::max(lower.n_max, upper.n_max);
  auto labels = std::make_shared<std::vector<std::vector<Decision>>>();
  labels->reserve(static_cast<std::size_t>(horizon));
  long conflicts = 0;
  for (int n = 1; n <= horizon; ++n) {
    std::vector<Decision> row(static_cast<std::size_t>(n) + 1, Decision::undecided);
    for (int s = 0; s <= n; ++s) {
      const Decision l = new_test_decision(s, n, lower.spec, lower.params);
      const Decision u = new_test_decision(s, n, upper.spec, upper.params);
      Decision d = Decision::undecided;
      if (l == Decision::scanner) {
        if (u == Decision::benign) ++conflicts;
        d = Decision::scanner;
      } else if (u == Decision::benign) {
        d = Decision::benign;
      } else if (l == Decision::benign && u == Decision::scanner) {
        d = Decision::marginal;
      }
      row[static_cast<std::size_t>(s)] = d;
    }
    labels->push_back(std::move(row));
  }
  StoppingPlan plan(
      "triple",
      [labels](int n, int s) {
        return labels->at(static_cast<std::size_t>(n - 1)).at(static_cast<std::size_t>(s));
      },
      horizon, {Decision::scanner, Decision::marginal, Decision::benign});
  return {std::move(plan), conflicts};
}

}  // namespace

void TripleSpec::validate() const {
  const bool ordered = 0.0 < p0_lo && p0_lo < p0 && p0 < p0_hi && p0_hi < p1_lo && p1_lo < p1 &&
                       p1 < p1_hi && p1_hi < 1.0;
  if (!ordered) {
    throw std::invalid_argument("TripleSpec requires 0 < p0_lo < p0 < p0_hi < p1_lo < p1 < p1_hi < 1");
  }
  if (!(in_unit(delta0) && in_unit(delta1) && in_unit(delta2))) {
    throw std::invalid_argument("TripleSpec requires each delta in (0, 1)");
  }
}

Decision TripleSpec::truth(double p) const {
  if (p <= p0) return Decision::scanner;
  if (p < p1) return Decision::marginal;
  return Decision::benign;
}

bool TripleSpec::in_indifference_zone(double p) const {
  return (p > p0_lo && p < p0_hi) || (p > p1_lo && p < p1_hi);
}

double TripleSpec::budget(double p) const {
  if (p <= p0_lo) return delta0;
  if (p >= p0_hi && p <= p1_lo) return delta1;
  if (p >= p1_hi) return delta2;
  return 0.0;
}

std::vector<double> triple_check_grid(const TripleSpec& spec, int points) {
  std::vector<double> grid;
  for (int i = 1; i <= points; ++i) {
    const double p = static_cast<double>(i) / (points + 1);
    if (!spec.in_indifference_zone(p)) grid.push_back(p);
  }
  for (double edge : {spec.p0_lo, spec.p0_hi, spec.p1_lo, spec.p1_hi}) grid.push_back(edge);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<TripleRiskPoint> triple_risk_curve(const StoppingPlan& plan, const TripleSpec& spec,
                                               std::span<const double> p_grid) {
  std::vector<TripleRiskPoint> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    const OcReport r = evaluate(plan, p);
    const Decision truth = spec.truth(p);
    double wrong = 0.0;
    for (Decision d : {Decision::scanner, Decision::marginal, Decision::benign}) {
      if (d != truth) wrong += r.accept_prob(d);
    }
    out.push_back({p, wrong, spec.in_indifference_zone(p), truth});
  }
  return out;
}

TriplePlan build_triple_plan(const TripleSpec& spec, const TripleOptions& options) {
  spec.validate();
  const std::vector<double> grid = triple_check_grid(spec, options.check_grid_points);
  for (int halvings = 0; halvings <= options.max_delta1_halvings; ++halvings) {
    const double d1 = std::ldexp(spec.delta1, -halvings);
    SubTest lower = tune_subtest(spec.p0_lo, spec.p0_hi, spec.delta0, d1, options.k_max);
    SubTest upper = tune_subtest(spec.p1_lo, spec.p1_hi, d1, spec.delta2, options.k_max);
    Composite composite = compose(lower, upper);

    double excess = -1.0;
    for (const TripleRiskPoint& pt : triple_risk_curve(composite.plan, spec, grid)) {
      if (pt.indifference) continue;
      excess = std::max(excess, pt.risk - spec.budget(pt.p));
    }
    if (excess <= 0.0) {
      return {std::move(composite.plan), lower, upper, halvings, composite.conflicts, excess};
    }
  }
  throw InfeasibleTuning("triple risk requirements still fail after " +
                         std::to_string(options.max_delta1_halvings) + " halvings of delta1");
}

void write_region_csv(std::ostream& os, const StoppingPlan& plan) {
  os << "n,s,label\n";
  for (int n = 1; n <= plan.horizon(); ++n) {
    for (int s = 0; s <= n; ++s) os << n << ',' << s << ',' << to_string(plan.label(n, s)) << '\n';
  }
}

}  // namespace seqscan
