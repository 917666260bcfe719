#include <catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "seqscan/errors.hpp"
#include "seqscan/oc_eval.hpp"
#include "seqscan/plans.hpp"
#include "seqscan/trwa.hpp"

using namespace seqscan;
using Catch::Approx;

namespace {

const TestSpec kWideSpec(0.2, 0.8, 0.1, 0.1);
const TunedParams kWideParams(0.1, 0.1, 1.0);

void require_same(const OcReport& a, const OcReport& b, double tol = 1e-12) {
  for (std::size_t d = 0; d < kDecisionCount; ++d) REQUIRE(std::abs(a.accept[d] - b.accept[d]) <= tol);
  REQUIRE(std::abs(a.residual_mass - b.residual_mass) <= tol);
  REQUIRE(std::abs(a.asn - b.asn) <= tol * 20);
  const std::size_t len = std::max(a.stop_dist.size(), b.stop_dist.size());
  for (std::size_t n = 0; n < len; ++n) {
    const double x = n < a.stop_dist.size() ? a.stop_dist[n] : 0.0;
    const double y = n < b.stop_dist.size() ? b.stop_dist[n] : 0.0;
    REQUIRE(std::abs(x - y) <= tol);
  }
}

// Plan with independently random labels per cell (non-contiguous sets allowed).
StoppingPlan random_plan(std::uint64_t seed, int horizon) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 5);
  auto labels = std::make_shared<std::vector<std::vector<Decision>>>();
  for (int n = 1; n <= horizon; ++n) {
    std::vector<Decision> row;
    for (int s = 0; s <= n; ++s) {
      const int r = pick(rng);
      row.push_back(r == 0 ? Decision::scanner : r == 1 ? Decision::benign : Decision::undecided);
    }
    labels->push_back(std::move(row));
  }
  return StoppingPlan(
      "random", [labels](int n, int s) { return (*labels)[n - 1][s]; }, horizon,
      {Decision::scanner, Decision::benign});
}

}  // namespace

TEST_CASE("immediate stopping plan", "[oc_eval]") {
  const StoppingPlan plan("stop", [](int, int) { return Decision::scanner; }, 5, {Decision::scanner});
  for (double p : {0.1, 0.5, 0.9}) {
    const OcReport r = evaluate(plan, p);
    CHECK(r.accept_prob(Decision::scanner) == 1.0);
    CHECK(r.asn == 1.0);
    CHECK(r.last_step == 1);
    CHECK(r.residual_mass == 0.0);
  }
  const OcReport b = brute_force_oc(plan.with_horizon(1), 0.3);
  REQUIRE(b.stop_dist.size() == 2);
  CHECK(b.stop_dist[1] == Approx(1.0).margin(1e-15));
}

TEST_CASE("evaluate matches brute-force enumeration on the two-threshold test", "[oc_eval][oracle]") {
  const StoppingPlan plan = new_test_plan(kWideSpec, kWideParams);
  REQUIRE(plan.horizon() == 11);
  for (double p : {0.1, 0.5, 0.9}) {
    const OcReport dp = evaluate(plan, p);
    const OcReport bf = brute_force_oc(plan, p);
    require_same(dp, bf);
    CHECK(dp.residual_mass == 0.0);
    CHECK(bf.total_accept() + bf.residual_mass == Approx(1.0).margin(1e-12));
  }
  // Symmetric configuration at p = 1/2.
  const OcReport half = evaluate(plan, 0.5);
  CHECK(half.accept_prob(Decision::scanner) == Approx(0.5).margin(1e-12));
}

TEST_CASE("oracle equivalence across plans with horizon <= 14", "[oc_eval][oracle][property]") {
  std::vector<StoppingPlan> plans = {
      new_test_plan(kWideSpec, kWideParams),
      new_test_plan(TestSpec(0.2, 0.8, 0.1, 0.1), TunedParams(0.05, 0.05, 1.0)),
      new_test_plan(TestSpec(0.1, 0.7, 0.1, 0.1), TunedParams(0.2, 0.05, 1.0)),
      trwa_plan(TestSpec(0.2, 0.6, 0.1, 0.1), TrwaParams(0.1, 10.0), 14, 0.0),
      random_plan(1, 12),
      random_plan(2, 14),
  };
  for (const StoppingPlan& plan : plans) {
    REQUIRE(plan.horizon() <= 14);
    for (int i = 1; i <= 19; ++i) {
      const double p = 0.05 * i;
      const OcReport dp = evaluate(plan, p);
      const OcReport bf = brute_force_oc(plan, p);
      require_same(dp, bf);
      REQUIRE(dp.total_accept() + dp.residual_mass == Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("brute force refuses large horizons", "[oc_eval]") {
  const StoppingPlan plan = trwa_plan(kWideSpec, TrwaParams(0.1, 10.0), 21, 0.0);
  CHECK_THROWS_AS(brute_force_oc(plan, 0.5), std::invalid_argument);
  CHECK_NOTHROW(brute_force_oc(plan.with_horizon(20), 0.5));
}

TEST_CASE("labels outside the declared outcomes are an invalid plan", "[oc_eval]") {
  const StoppingPlan plan("bad", [](int n, int) { return n == 1 ? Decision::marginal : Decision::scanner; }, 3,
                          {Decision::scanner, Decision::benign});
  CHECK_THROWS_AS(evaluate(plan, 0.5), InvalidPlan);
  CHECK_THROWS_AS(StoppingPlan("x", [](int, int) { return Decision::scanner; }, 0, {Decision::scanner}),
                  InvalidPlan);
  CHECK_THROWS_AS(StoppingPlan("x", [](int, int) { return Decision::scanner; }, 3, {}), InvalidPlan);
  CHECK_THROWS_AS(evaluate(new_test_plan(kWideSpec, kWideParams), 1.0), std::domain_error);
}

TEST_CASE("acceptance of H0 is non-increasing in p", "[oc_eval][property]") {
  const std::vector<StoppingPlan> plans = {
      new_test_plan(kWideSpec, kWideParams),
      new_test_plan(TestSpec(0.1, 0.15, 0.1, 0.1), TunedParams(0.1, 0.1, 0.96)),
      new_test_plan(TestSpec(0.1, 0.4, 0.1, 0.1), TunedParams(0.02, 0.3, 1.0)),
  };
  for (const StoppingPlan& plan : plans) {
    double prev = 1.0;
    for (double p = 0.01; p < 0.995; p += 0.01) {
      const OcReport r = evaluate(plan, p);
      const double h0 = r.accept_prob(Decision::scanner);
      REQUIRE(h0 <= prev + 1e-12);
      prev = h0;
      REQUIRE(r.asn >= 1.0);
      REQUIRE(r.asn <= plan.horizon());
      REQUIRE(r.residual_mass == 0.0);
      REQUIRE(static_cast<int>(r.stop_dist.size()) - 1 <= plan.horizon());
      REQUIRE(r.total_accept() == Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("truncated evaluation reports residual mass", "[oc_eval]") {
  const TestSpec spec(0.1, 0.15, 0.1, 0.1);
  const StoppingPlan plan = trwa_plan(spec, TrwaParams(0.1, 10.0), 50, 0.0);
  const OcReport r = evaluate(plan, 0.12);
  CHECK(r.residual_mass > 0.1);
  CHECK(r.last_step == 50);
  CHECK(r.total_accept() + r.residual_mass == Approx(1.0).margin(1e-12));

  const OcReport cut = evaluate(trwa_plan(spec, TrwaParams(0.1, 10.0)), 0.12);
  CHECK(cut.residual_mass > 0.0);
  CHECK(cut.residual_mass < 1e-12);
  CHECK(cut.total_accept() + cut.residual_mass == Approx(1.0).margin(1e-12));
}

TEST_CASE("risk curve flags the unspecified zone", "[oc_eval]") {
  const TestSpec spec(0.1, 0.15, 0.1, 0.1);
  const StoppingPlan plan = new_test_plan(spec, TunedParams(0.1, 0.1, 0.4));
  const std::vector<double> grid = {0.01, 0.03, 0.05, 0.08, 0.1, 0.12, 0.15, 0.3, 0.6};
  const auto curve = risk_curve(plan, spec, grid);
  REQUIRE(curve.size() == grid.size());
  CHECK(curve[5].unspecified);
  CHECK(curve[5].risk == 0.0);
  // Risk of rejecting H0 shrinks as p moves away from p0 towards 0.
  for (int i = 3; i >= 1; --i) CHECK(curve[static_cast<std::size_t>(i)].risk >= curve[static_cast<std::size_t>(i - 1)].risk);
  // Dominated by two straight successes: p^2 = 1e-4.
  CHECK(curve[0].risk == Approx(1e-4).epsilon(0.1));
  CHECK_FALSE(curve[4].unspecified);
  CHECK_FALSE(curve[6].unspecified);
}

TEST_CASE("asn ratio of a plan with itself is one", "[oc_eval]") {
  const StoppingPlan plan = new_test_plan(kWideSpec, kWideParams);
  const std::vector<double> grid = make_grid(0.05, 0.95, 0.05);
  CHECK(grid.size() == 19);
  for (const auto& pt : asn_ratio_curve(plan, plan, grid)) CHECK(pt.ratio == 1.0);
}

TEST_CASE("grid construction", "[oc_eval]") {
  const auto g = make_grid(0.1, 0.2, 0.05);
  REQUIRE(g.size() == 3);
  CHECK(g.back() == Approx(0.2));
  CHECK(make_grid(0.3, 0.3, 0.1).size() == 1);
  CHECK_THROWS(make_grid(0.3, 0.1, 0.1));
  CHECK_THROWS(make_grid(0.1, 0.3, 0.0));
}

TEST_CASE("CSV exports", "[oc_eval]") {
  const StoppingPlan plan = new_test_plan(kWideSpec, kWideParams);
  const std::vector<OcReport> reports = {evaluate(plan, 0.5)};
  std::ostringstream os;
  write_oc_csv(os, plan, reports);
  CHECK(os.str() == "p,accept_scanner,accept_benign,asn,residual\n0.5,0.5,0.5,3.625,0\n");
  std::ostringstream sd;
  write_stop_dist_csv(sd, reports[0]);
  CHECK(sd.str().rfind("n,prob\n1,0\n2,0.5\n", 0) == 0);
}
