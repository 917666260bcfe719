#include "seqscan/oc_eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include "seqscan/errors.hpp"

namespace seqscan {

namespace {

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("success rate must lie in (0, 1)");
}

// Forward propagation of probability mass through the continue cells of a
// plan. Only the span of s values that still carry mass is stored, so plans
// with a narrow continuation band (SPRT) cost O(band) per step.
class LatticeWalker {
 public:
  LatticeWalker(const StoppingPlan& plan, double p) : plan_(plan), p_(p), mass_{1.0} {}

  int n() const { return n_; }
  bool exhausted() const { return mass_.empty(); }
  double continuing() const { return continuing_; }
  const std::array<double, kDecisionCount>& banked() const { return banked_; }
  double banked_total() const { return banked_total_; }

  void advance() {
    ++n_;
    banked_.fill(0.0);
    banked_total_ = 0.0;
    next_.assign(mass_.size() + 1, 0.0);
    for (std::size_t i = 0; i < mass_.size(); ++i) {
      next_[i] += mass_[i] * (1.0 - p_);
      next_[i + 1] += mass_[i] * p_;
    }
    continuing_ = 0.0;
    for (std::size_t i = 0; i < next_.size(); ++i) {
      if (next_[i] == 0.0) continue;
      const Decision d = plan_.label(n_, base_ + static_cast<int>(i));
      if (d == Decision::undecided) {
        continuing_ += next_[i];
      } else {
        banked_[index(d)] += next_[i];
        banked_total_ += next_[i];
        next_[i] = 0.0;
      }
    }
    // Trim stopped cells off both ends of the live span.
    std::size_t lo = 0, hi = next_.size();
    while (lo < hi && next_[lo] == 0.0) ++lo;
    while (hi > lo && next_[hi - 1] == 0.0) --hi;
    base_ += static_cast<int>(lo);
    mass_.assign(next_.begin() + static_cast<std::ptrdiff_t>(lo),
                 next_.begin() + static_cast<std::ptrdiff_t>(hi));
  }

 private:
  const StoppingPlan& plan_;
  double p_;
  int n_ = 0;
  int base_ = 0;
  std::vector<double> mass_;
  std::vector<double> next_;
  double continuing_ = 1.0;
  std::array<double, kDecisionCount> banked_{};
  double banked_total_ = 0.0;
};

}  // namespace

double OcReport::total_accept() const {
  double sum = 0.0;
  for (double v : accept) sum += v;
  return sum;
}

OcReport evaluate(const StoppingPlan& plan, double p) {
  check_probability(p);
  OcReport report;
  report.p = p;
  report.stop_dist.push_back(0.0);
  LatticeWalker walker(plan, p);
  const double cutoff = plan.mass_cutoff();
  while (walker.n() < plan.horizon() && !walker.exhausted()) {
    if (cutoff > 0.0 && walker.continuing() < cutoff) break;
    walker.advance();
    for (std::size_t d = 0; d < kDecisionCount; ++d) report.accept[d] += walker.banked()[d];
    report.stop_dist.push_back(walker.banked_total());
    report.asn += walker.n() * walker.banked_total();
  }
  report.last_step = walker.n();
  report.residual_mass = walker.exhausted() ? 0.0 : walker.continuing();
  report.asn += report.last_step * report.residual_mass;
  return report;
}

OcReport brute_force_oc(const StoppingPlan& plan, double p) {
  check_probability(p);
  const int horizon = plan.horizon();
  if (horizon > kBruteForceMaxHorizon) {
    throw std::invalid_argument("brute_force_oc refuses horizon " + std::to_string(horizon) +
                                " > " + std::to_string(kBruteForceMaxHorizon));
  }
  OcReport report;
  report.p = p;
  report.stop_dist.assign(static_cast<std::size_t>(horizon) + 1, 0.0);
  report.last_step = horizon;
  const std::uint32_t paths = std::uint32_t{1} << horizon;
  for (std::uint32_t path = 0; path < paths; ++path) {
    const int k = std::popcount(path);
    const double prob = std::pow(p, k) * std::pow(1.0 - p, horizon - k);
    int s = 0;
    Decision d = Decision::undecided;
    int n = 1;
    for (; n <= horizon; ++n) {
      s += static_cast<int>((path >> (n - 1)) & 1U);
      d = plan.label(n, s);
      if (d != Decision::undecided) break;
    }
    if (d == Decision::undecided) {
      report.residual_mass += prob;
      report.asn += horizon * prob;
    } else {
      report.accept[index(d)] += prob;
      report.stop_dist[static_cast<std::size_t>(n)] += prob;
      report.asn += n * prob;
    }
  }
  // Match evaluate(): the distribution ends at the last step with mass.
  while (report.stop_dist.size() > 1 && report.stop_dist.back() == 0.0 && report.residual_mass == 0.0) {
    report.stop_dist.pop_back();
  }
  if (report.residual_mass == 0.0) report.last_step = static_cast<int>(report.stop_dist.size()) - 1;
  return report;
}

int stop_time_quantile(const StoppingPlan& plan, double p, double q) {
  check_probability(p);
  if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("quantile level must lie in [0, 1)");
  if (q == 0.0) return 1;
  LatticeWalker walker(plan, p);
  double stopped = 0.0;
  while (walker.n() < plan.horizon() && !walker.exhausted()) {
    walker.advance();
    stopped += walker.banked_total();
    if (stopped >= q || walker.exhausted()) return walker.n();
  }
  throw HorizonExceeded("stop-time quantile " + std::to_string(q) + " not reached within horizon " +
                            std::to_string(plan.horizon()),
                        stopped);
}

std::vector<RiskPoint> risk_curve(const StoppingPlan& plan, const TestSpec& spec,
                                  std::span<const double> p_grid) {
  std::vector<RiskPoint> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    if (p > spec.p0() && p < spec.p1()) {
      check_probability(p);
      out.push_back({p, 0.0, true});
      continue;
    }
    const OcReport r = evaluate(plan, p);
    const double risk = p <= spec.p0() ? r.accept_prob(Decision::benign) : r.accept_prob(Decision::scanner);
    out.push_back({p, risk, false});
  }
  return out;
}

std::vector<AsnRatioPoint> asn_ratio_curve(const StoppingPlan& plan_a, const StoppingPlan& plan_b,
                                           std::span<const double> p_grid) {
  std::vector<AsnRatioPoint> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    const OcReport a = evaluate(plan_a, p);
    const OcReport b = evaluate(plan_b, p);
    out.push_back({p, a.asn, b.asn, a.asn / b.asn, a.residual_mass, b.residual_mass});
  }
  return out;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(lo <= hi)) throw std::invalid_argument("grid needs lo <= hi and step > 0");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    if (v > hi + step * 1e-9) break;
    grid.push_back(std::min(v, hi));
  }
  return grid;
}

void write_oc_csv(std::ostream& os, const StoppingPlan& plan, std::span<const OcReport> reports) {
  const auto& outs = plan.outcomes();
  const bool triple = std::find(outs.begin(), outs.end(), Decision::marginal) != outs.end();
  os << (triple ? "p,accept_scanner,accept_marginal,accept_benign,asn,residual\n"
                : "p,accept_scanner,accept_benign,asn,residual\n");
  os << std::setprecision(12);
  for (const OcReport& r : reports) {
    os << r.p << ',' << r.accept_prob(Decision::scanner) << ',';
    if (triple) os << r.accept_prob(Decision::marginal) << ',';
    os << r.accept_prob(Decision::benign) << ',' << r.asn << ',' << r.residual_mass << '\n';
  }
}

void write_stop_dist_csv(std::ostream& os, const OcReport& report) {
  os << "n,prob\n" << std::setprecision(12);
  for (std::size_t n = 1; n < report.stop_dist.size(); ++n) os << n << ',' << report.stop_dist[n] << '\n';
}

}  // namespace seqscan
