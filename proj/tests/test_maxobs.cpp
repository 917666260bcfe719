#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "seqscan/maxobs.hpp"
#include "seqscan/oc_eval.hpp"
#include "seqscan/plans.hpp"

using namespace seqscan;
using Catch::Approx;

namespace {

double log_curve_oracle(double z, double p) {
  return std::log(std::pow((1 - p) / (1 - z), 1 - z) * std::pow(p / z, z));
}

}  // namespace

TEST_CASE("bound for the two-threshold configuration", "[maxobs]") {
  const TestSpec spec(0.2, 0.8, 0.1, 0.1);
  const MaxObsResult bisected = solve_max_obs(spec, TunedParams(0.1, 0.1, 1.0));
  const MaxObsResult closed = closed_form_max_obs(spec, 0.1);
  // g0(0.5) = sqrt(0.8/0.5 * 0.2/0.5) = 0.8
  const double m_oracle = std::log(0.1) / std::log(0.8);
  CHECK(m_oracle == Approx(10.32).margin(0.01));
  CHECK(closed.z_star == Approx(0.5).margin(1e-12));
  CHECK(bisected.z_star == Approx(0.5).margin(1e-9));
  CHECK(closed.m_star == Approx(m_oracle).epsilon(1e-12));
  CHECK(bisected.m_star == Approx(m_oracle).epsilon(1e-9));
  CHECK(closed.n_max == 11);
  CHECK(bisected.n_max == 11);
}

TEST_CASE("closed form for a = b on the low-rate configuration", "[maxobs]") {
  const TestSpec spec(0.1, 0.15, 0.1, 0.1);
  const double expected = std::log(0.9 / 0.85) / std::log(0.9 * 0.15 / (0.85 * 0.1));
  const MaxObsResult r = closed_form_max_obs(spec, 0.096);
  CHECK(r.z_star == Approx(expected).epsilon(1e-14));
  CHECK(r.z_star > 0.1);
  CHECK(r.z_star < 0.15);
  // ceil-style bound near 811; floor(m*) + 1 lands on 812.
  CHECK(std::abs(r.n_max - 811) <= 1);
  CHECK(solve_max_obs(spec, TunedParams(0.1, 0.1, 0.96)).n_max == r.n_max);
}

TEST_CASE("symmetric thresholds cross at one half", "[maxobs]") {
  for (double p0 : {0.05, 0.2, 1.0 / 3.0, 0.45}) {
    const TestSpec spec(p0, 1.0 - p0, 0.1, 0.1);
    CHECK(closed_form_max_obs(spec, 0.07).z_star == Approx(0.5).margin(1e-15));
  }
}

TEST_CASE("closed form and bisection agree on random a = b configurations", "[maxobs][property]") {
  std::mt19937_64 rng(811);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double p0 = 0.01 + 0.8 * unit(rng);
    const double p1 = p0 + (0.99 - p0) * (0.05 + 0.9 * unit(rng));
    const double a = 0.001 + 0.6 * unit(rng);
    const double zeta = 0.1 + 0.9 * unit(rng);
    const TestSpec spec(p0, p1, 0.1, 0.1);
    const MaxObsResult b = solve_max_obs(spec, TunedParams(a, a, zeta));
    const MaxObsResult c = closed_form_max_obs(spec, zeta * a);
    REQUIRE(b.z_star == Approx(c.z_star).margin(1e-9));
    REQUIRE(std::abs(b.n_max - c.n_max) <= 1);
  }
}

TEST_CASE("bisected crossing satisfies both curve equations", "[maxobs]") {
  const TestSpec spec(0.1, 0.4, 0.1, 0.1);
  const TunedParams params(0.02, 0.3, 1.0);
  const MaxObsResult r = solve_max_obs(spec, params);
  CHECK(r.z_star > 0.1);
  CHECK(r.z_star < 0.4);
  CHECK(r.n_max == static_cast<int>(std::floor(r.m_star)) + 1);
  CHECK(std::pow(params.zeta_a(), 1.0 / r.m_star) == Approx(std::exp(log_curve_oracle(r.z_star, 0.1))).epsilon(1e-9));
  CHECK(std::pow(params.zeta_b(), 1.0 / r.m_star) == Approx(std::exp(log_curve_oracle(r.z_star, 0.4))).epsilon(1e-9));
}

TEST_CASE("bound grows as the risk tuning parameter shrinks", "[maxobs][property]") {
  const TestSpec spec(0.1, 0.15, 0.1, 0.1);
  int previous = 0;
  for (double zeta = 1.0; zeta > 1e-3; zeta *= 0.8) {
    const int n_max = solve_max_obs(spec, TunedParams(0.1, 0.1, zeta)).n_max;
    CHECK(n_max >= previous);
    previous = n_max;
  }
}

TEST_CASE("the bound is tight up to lattice granularity", "[maxobs]") {
  const std::vector<std::pair<TestSpec, TunedParams>> configs = {
      {TestSpec(0.2, 0.8, 0.1, 0.1), TunedParams(0.1, 0.1, 1.0)},
      {TestSpec(0.1, 0.15, 0.1, 0.1), TunedParams(0.1, 0.1, 0.96)},
      {TestSpec(0.3, 0.6, 0.05, 0.05), TunedParams(0.05, 0.02, 1.0)},
  };
  for (const auto& [spec, params] : configs) {
    const MaxObsResult bound = solve_max_obs(spec, params);
    const StoppingPlan plan = new_test_plan(spec, params, bound.n_max);
    CHECK(evaluate(plan, 0.5 * (spec.p0() + spec.p1())).residual_mass == 0.0);
    // The continuation gap around z* narrows to zero at m*; the last row
    // holding a lattice point inside it sits just below m*.
    int last_open = 0;
    for (int n = 1; n <= bound.n_max; ++n) {
      for (int s = 0; s <= n; ++s) {
        if (plan.label(n, s) == Decision::undecided) last_open = n;
      }
    }
    CHECK(last_open < bound.n_max);
    CHECK(last_open >= 0.97 * bound.m_star - 1.0);
  }
  // For the symmetric pair the cell (10, 5) sits exactly at z* = 1/2.
  const TestSpec spec(0.2, 0.8, 0.1, 0.1);
  CHECK(new_test_plan(spec, TunedParams(0.1, 0.1, 1.0)).label(10, 5) == Decision::undecided);
}

TEST_CASE("two-threshold configuration stops every path by n = 7", "[maxobs]") {
  // Reachability, not the table, decides the last stopping step: the cells
  // left open at n = 8..10 cannot be reached. Oracle: exhaustive paths.
  const TestSpec spec(0.2, 0.8, 0.1, 0.1);
  const TunedParams params(0.1, 0.1, 1.0);
  int last_stop = 0;
  for (unsigned path = 0; path < (1U << 11); ++path) {
    int s = 0;
    for (int n = 1; n <= 11; ++n) {
      s += static_cast<int>((path >> (n - 1)) & 1U);
      if (new_test_decision(s, n, spec, params) != Decision::undecided) {
        last_stop = std::max(last_stop, n);
        break;
      }
    }
  }
  CHECK(last_stop == 7);
  const StoppingPlan plan = new_test_plan(spec, params);
  CHECK(evaluate(plan.with_horizon(7), 0.5).residual_mass == 0.0);
  CHECK(evaluate(plan.with_horizon(6), 0.5).residual_mass > 0.0);
}
