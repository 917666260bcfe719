#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "seqscan/decision.hpp"

namespace seqscan {

// Binary test problem H0: p <= p0 (scanner) versus H1: p >= p1 (benign),
// with risk budgets alpha = Pr{reject H0 | p <= p0} and
// beta = Pr{reject H1 | p >= p1}.
class TestSpec {
 public:
  TestSpec(double p0, double p1, double alpha, double beta);

  double p0() const { return p0_; }
  double p1() const { return p1_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

 private:
  double p0_, p1_, alpha_, beta_;
};

// Weighting coefficients a, b and risk tuning parameter zeta. The stopping
// thresholds are ln(1/(zeta*a)) and ln(1/(zeta*b)), so both products must
// stay below one.
class TunedParams {
 public:
  TunedParams(double a, double b, double zeta);

  double a() const { return a_; }
  double b() const { return b_; }
  double zeta() const { return zeta_; }
  double zeta_a() const { return zeta_ * a_; }
  double zeta_b() const { return zeta_ * b_; }

 private:
  double a_, b_, zeta_;
};

// Kullback-Leibler divergence of Bernoulli(s/n) from Bernoulli(p), using the
// closed endpoint forms at s = 0 and s = n.
double kl_stat(int successes, int trials, double p);

// Y_n: divergence of the empirical rate from p0.
inline double y_stat(int successes, int trials, double p0) { return kl_stat(successes, trials, p0); }
// Z_n: divergence of the empirical rate from p1.
inline double z_stat(int successes, int trials, double p1) { return kl_stat(successes, trials, p1); }

// Exact comparisons of the rational s/n against a double threshold.
bool rate_at_most(int successes, int trials, double p);
bool rate_at_least(int successes, int trials, double p);

// Stateless stopping rule at lattice point (n, s). Scanner is checked first,
// so it wins if both conditions hold.
Decision new_test_decision(int successes, int trials, const TestSpec& spec, const TunedParams& params);

struct DetectorState {
  int n = 0;
  int s = 0;
  Decision decision = Decision::undecided;

  bool decided() const { return decision != Decision::undecided; }
};

// Consumes one observation. Throws std::logic_error if `state` is already decided.
DetectorState step(const DetectorState& state, bool success, const TunedParams& params,
                   const TestSpec& spec);

// Per-step success-count stopping sets for n = 1..n_max. The scanner set at n
// is {0..s_scanner(n)} and the benign set is {s_benign(n)..n}.
class BoundaryTable {
 public:
  struct Row {
    std::optional<int> s_scanner;
    std::optional<int> s_benign;
  };

  BoundaryTable(int n_max, std::vector<Row> rows) : n_max_(n_max), rows_(std::move(rows)) {}

  int n_max() const { return n_max_; }
  const Row& row(int n) const { return rows_.at(static_cast<std::size_t>(n - 1)); }
  Decision lookup(int n, int s) const;

  void write_csv(std::ostream& os) const;

 private:
  int n_max_;
  std::vector<Row> rows_;
};

BoundaryTable build_boundary_table(const TestSpec& spec, const TunedParams& params, int n_max);

}  // namespace seqscan
