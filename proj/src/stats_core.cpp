#include "seqscan/stats_core.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace seqscan {

namespace {

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

void check_counts(int successes, int trials) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw std::invalid_argument("need 0 <= s <= n and n >= 1, got s=" + std::to_string(successes) +
                                " n=" + std::to_string(trials));
  }
}

// Sign of s - p*n, exact: fma rounds once, so a nonzero exact value never
// rounds to zero or flips sign.
double rate_gap(int successes, int trials, double p) {
  return std::fma(-p, static_cast<double>(trials), static_cast<double>(successes));
}

}  // namespace

TestSpec::TestSpec(double p0, double p1, double alpha, double beta)
    : p0_(p0), p1_(p1), alpha_(alpha), beta_(beta) {
  if (!(open_unit(p0) && open_unit(p1) && p0 < p1)) {
    throw std::invalid_argument("TestSpec requires 0 < p0 < p1 < 1");
  }
  if (!(open_unit(alpha) && open_unit(beta))) {
    throw std::invalid_argument("TestSpec requires alpha, beta in (0, 1)");
  }
}

TunedParams::TunedParams(double a, double b, double zeta) : a_(a), b_(b), zeta_(zeta) {
  if (!(a > 0.0 && b > 0.0 && zeta > 0.0) || !std::isfinite(a) || !std::isfinite(b) ||
      !std::isfinite(zeta)) {
    throw std::invalid_argument("TunedParams requires positive finite a, b, zeta");
  }
  if (!(zeta * a < 1.0 && zeta * b < 1.0)) {
    throw std::invalid_argument("TunedParams requires zeta*a < 1 and zeta*b < 1");
  }
}

double kl_stat(int successes, int trials, double p) {
  if (!open_unit(p)) throw std::domain_error("reference probability must lie in (0, 1)");
  check_counts(successes, trials);
  if (successes == 0) return -std::log1p(-p);
  if (successes == trials) return -std::log(p);
  const double q = static_cast<double>(successes) / trials;
  const double v = q * std::log(q / p) + (1.0 - q) * std::log((1.0 - q) / (1.0 - p));
  // Rounding can leave a tiny negative value near q == p.
  return v > 0.0 ? v : 0.0;
}

bool rate_at_most(int successes, int trials, double p) { return rate_gap(successes, trials, p) <= 0.0; }

bool rate_at_least(int successes, int trials, double p) { return rate_gap(successes, trials, p) >= 0.0; }

Decision new_test_decision(int successes, int trials, const TestSpec& spec, const TunedParams& params) {
  const double n = trials;
  if (rate_at_most(successes, trials, spec.p1()) &&
      z_stat(successes, trials, spec.p1()) >= std::log(1.0 / params.zeta_b()) / n) {
    return Decision::scanner;
  }
  if (rate_at_least(successes, trials, spec.p0()) &&
      y_stat(successes, trials, spec.p0()) >= std::log(1.0 / params.zeta_a()) / n) {
    return Decision::benign;
  }
  return Decision::undecided;
}

DetectorState step(const DetectorState& state, bool success, const TunedParams& params,
                   const TestSpec& spec) {
  if (state.decided()) throw std::logic_error("step() on a decided detector state");
  DetectorState next = state;
  next.n += 1;
  next.s += success ? 1 : 0;
  next.decision = new_test_decision(next.s, next.n, spec, params);
  return next;
}

Decision BoundaryTable::lookup(int n, int s) const {
  if (n < 1 || n > n_max_ || s < 0 || s > n) {
    throw std::out_of_range("BoundaryTable::lookup outside the table");
  }
  const Row& r = row(n);
  if (r.s_scanner && s <= *r.s_scanner) return Decision::scanner;
  if (r.s_benign && s >= *r.s_benign) return Decision::benign;
  return Decision::undecided;
}

void BoundaryTable::write_csv(std::ostream& os) const {
  os << "n,s_scanner,s_benign\n";
  for (int n = 1; n <= n_max_; ++n) {
    const Row& r = row(n);
    os << n << ',';
    if (r.s_scanner) os << *r.s_scanner;
    os << ',';
    if (r.s_benign) os << *r.s_benign;
    os << '\n';
  }
}

BoundaryTable build_boundary_table(const TestSpec& spec, const TunedParams& params, int n_max) {
  if (n_max < 1) throw std::invalid_argument("build_boundary_table requires n_max >= 1");
  std::vector<BoundaryTable::Row> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    BoundaryTable::Row row;
    // Labels along s must read scanner* undecided* benign*.
    int phase = 0;
    for (int s = 0; s <= n; ++s) {
      const Decision d = new_test_decision(s, n, spec, params);
      const int rank = d == Decision::scanner ? 0 : d == Decision::undecided ? 1 : 2;
      if (rank < phase) {
        throw std::logic_error("stopping sets are not contiguous at n=" + std::to_string(n));
      }
      phase = rank;
      if (d == Decision::scanner) row.s_scanner = s;
      if (d == Decision::benign && !row.s_benign) row.s_benign = s;
    }
    rows.push_back(row);
  }
  return BoundaryTable(n_max, std::move(rows));
}

}  // namespace seqscan
