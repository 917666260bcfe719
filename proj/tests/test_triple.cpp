#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "seqscan/oc_eval.hpp"
#include "seqscan/triple.hpp"

using namespace seqscan;
using Catch::Approx;

namespace {

TripleSpec thirds_spec() {
  return TripleSpec{1.0 / 3, 2.0 / 3, 2.0 / 9, 4.0 / 9, 5.0 / 9, 7.0 / 9, 0.1, 0.1, 0.1};
}

const TriplePlan& thirds_plan() {
  static const TriplePlan tp = build_triple_plan(thirds_spec());
  return tp;
}

// Row n as run-length encoded labels.
std::vector<std::pair<Decision, int>> bands(const StoppingPlan& plan, int n) {
  std::vector<std::pair<Decision, int>> out;
  for (int s = 0; s <= n; ++s) {
    const Decision d = plan.label(n, s);
    if (out.empty() || out.back().first != d) out.emplace_back(d, 0);
    ++out.back().second;
  }
  return out;
}

}  // namespace

TEST_CASE("triple spec validation and classification") {
  const TripleSpec sp = thirds_spec();
  REQUIRE_NOTHROW(sp.validate());
  CHECK(sp.truth(0.1) == Decision::scanner);
  CHECK(sp.truth(0.5) == Decision::marginal);
  CHECK(sp.truth(0.9) == Decision::benign);
  CHECK(sp.in_indifference_zone(0.3));
  CHECK(sp.in_indifference_zone(0.7));
  CHECK_FALSE(sp.in_indifference_zone(0.5));
  CHECK_FALSE(sp.in_indifference_zone(0.1));
  CHECK(sp.budget(0.3) == 0.0);
  CHECK(sp.budget(0.1) == 0.1);

  TripleSpec bad = sp;
  bad.p0_hi = 0.6;  // overlaps the upper zone
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = sp;
  bad.delta1 = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = sp;
  bad.p0_lo = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("triple plan on the thirds config meets every requirement") {
  const TriplePlan& tp = thirds_plan();
  const TripleSpec sp = thirds_spec();
  CHECK(tp.conflict_cells == 0);
  CHECK(tp.max_risk_excess <= 0.0);
  CHECK(tp.plan.horizon() == std::max(tp.lower.n_max, tp.upper.n_max));

  const auto grid = triple_check_grid(sp, 200);
  int checked = 0;
  for (const auto& pt : triple_risk_curve(tp.plan, sp, grid)) {
    if (pt.indifference) continue;
    ++checked;
    INFO("p = " << pt.p);
    CHECK(pt.risk <= sp.budget(pt.p) + 1e-12);
  }
  CHECK(checked >= 100);
}

TEST_CASE("triple plan leaves no undecided cell at the horizon") {
  const auto& plan = thirds_plan().plan;
  const int h = plan.horizon();
  for (int s = 0; s <= h; ++s) CHECK(plan.label(h, s) != Decision::undecided);
  const OcReport r = evaluate(plan, 0.5);
  CHECK(r.residual_mass == 0.0);
}

TEST_CASE("triple acceptance regions form ordered contiguous bands") {
  const auto& plan = thirds_plan().plan;
  const int h = plan.horizon();
  // Every row: scanner block, then marginal block, then benign block,
  // separated only by undecided cells.
  for (int n = 1; n <= h; ++n) {
    int last_rank = -1;
    for (const auto& band : bands(plan, n)) {
      const Decision d = band.first;
      if (d == Decision::undecided) continue;
      const int rank = d == Decision::scanner ? 0 : d == Decision::marginal ? 1 : 2;
      INFO("n = " << n);
      CHECK(rank > last_rank);  // each label appears in at most one band, in order
      last_rank = rank;
    }
  }
  const auto last = bands(plan, h);
  REQUIRE(last.size() == 3);
  CHECK(last[0].first == Decision::scanner);
  CHECK(last[1].first == Decision::marginal);
  CHECK(last[2].first == Decision::benign);
}

TEST_CASE("degenerate streams reach the extreme hypotheses") {
  const auto& plan = thirds_plan().plan;
  Decision low = Decision::undecided;
  Decision high = Decision::undecided;
  for (int n = 1; n <= plan.horizon() && low == Decision::undecided; ++n) low = plan.label(n, 0);
  for (int n = 1; n <= plan.horizon() && high == Decision::undecided; ++n) high = plan.label(n, n);
  CHECK(low == Decision::scanner);
  CHECK(high == Decision::benign);
  CHECK(evaluate(plan, 1e-9).accept_prob(Decision::scanner) == Approx(1.0).margin(1e-6));
  CHECK(evaluate(plan, 1 - 1e-9).accept_prob(Decision::benign) == Approx(1.0).margin(1e-6));
}

TEST_CASE("truncated triple plans agree with path enumeration") {
  const auto& full = thirds_plan().plan;
  for (int h : {8, 12, 14}) {
    const StoppingPlan plan = full.with_horizon(h);
    for (double p : {0.05, 1.0 / 3, 0.5, 0.8}) {
      const OcReport a = evaluate(plan, p);
      const OcReport b = brute_force_oc(plan, p);
      for (std::size_t i = 0; i < kDecisionCount; ++i) CHECK(std::abs(a.accept[i] - b.accept[i]) < 1e-12);
      CHECK(std::abs(a.asn - b.asn) < 1e-12 * a.asn);
      CHECK(std::abs(a.residual_mass - b.residual_mass) < 1e-12);
    }
  }
}

TEST_CASE("risk near zero tracks the probability of missing H0") {
  const auto& plan = thirds_plan().plan;
  const TripleSpec sp = thirds_spec();
  const std::vector<double> grid{0.01, 0.05, 0.1, 0.15};
  const auto curve = triple_risk_curve(plan, sp, grid);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(curve[i].risk == Approx(1.0 - evaluate(plan, grid[i]).accept_prob(Decision::scanner)).margin(1e-12));
    if (i > 0) CHECK(curve[i].risk >= curve[i - 1].risk - 1e-15);
  }
}

TEST_CASE("region csv lists every cell") {
  const StoppingPlan plan = thirds_plan().plan.with_horizon(3);
  std::ostringstream os;
  write_region_csv(os, plan);
  const std::string text = os.str();
  CHECK(text.rfind("n,s,label\n", 0) == 0);
  int lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 1 + (2 + 3 + 4));
}
