#include "seqscan/montecarlo.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

namespace seqscan {

namespace {

struct RunOutcome {
  Decision decision;
  int stop;
};

RunOutcome run_once(const StoppingPlan& plan, double p, std::uint64_t seed, std::uint64_t run) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
  std::mt19937_64 gen(seq);
  int s = 0;
  for (int n = 1; n <= plan.horizon(); ++n) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    s += u < p ? 1 : 0;
    const Decision d = plan.label(n, s);
    if (d != Decision::undecided) return {d, n};
  }
  return {Decision::undecided, plan.horizon()};
}

}  // namespace

SimReport simulate(const StoppingPlan& plan, double p, long runs, std::uint64_t seed, unsigned threads) {
  if (runs < 1) throw std::invalid_argument("simulate requires runs >= 1");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("success rate must lie in (0, 1)");
  const auto count = static_cast<std::size_t>(runs);
  std::vector<RunOutcome> outcomes(count);
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::min<long>(runs, 256))));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) outcomes[i] = run_once(plan, p, seed, i);
  };
  if (threads == 1) {
    work(0, count);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(count, t * chunk);
      pool.emplace_back(work, begin, std::min(count, begin + chunk));
    }
    for (auto& th : pool) th.join();
  }

  SimReport report;
  report.p = p;
  report.runs = runs;
  report.seed = seed;
  report.generator = kGeneratorName;
  std::array<long, kDecisionCount> counts{};
  std::vector<int> stops;
  stops.reserve(count);
  double sum = 0.0, sum_sq = 0.0;
  for (const RunOutcome& o : outcomes) {
    ++counts[index(o.decision)];
    stops.push_back(o.stop);
    sum += o.stop;
    sum_sq += static_cast<double>(o.stop) * o.stop;
  }
  const double n = static_cast<double>(runs);
  for (std::size_t d = 0; d < kDecisionCount; ++d) {
    const double f = counts[d] / n;
    report.decision_freq[d] = f;
    report.decision_std_err[d] = std::sqrt(f * (1.0 - f) / n);
  }
  report.truncated = counts[index(Decision::undecided)];
  report.mean_stop = sum / n;
  const double var = runs > 1 ? std::max(0.0, (sum_sq - n * report.mean_stop * report.mean_stop) / (n - 1.0)) : 0.0;
  report.mean_stop_std_err = std::sqrt(var / n);
  std::sort(stops.begin(), stops.end());
  report.max_stop = stops.back();
  // Nearest-rank quantiles: smallest stop time whose empirical CDF reaches q.
  for (double q : {0.5, 0.9, 0.99, 0.999}) {
    const auto rank = static_cast<std::size_t>(std::ceil(q * n));
    report.stop_quantiles[q] = stops[std::clamp<std::size_t>(rank, 1, count) - 1];
  }
  return report;
}

std::string SimReport::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["runs"] = runs;
  j["seed"] = seed;
  j["generator"] = generator;
  nlohmann::ordered_json freq, err;
  for (Decision d : {Decision::scanner, Decision::marginal, Decision::benign, Decision::undecided}) {
    freq[std::string(seqscan::to_string(d))] = decision_freq[index(d)];
    err[std::string(seqscan::to_string(d))] = decision_std_err[index(d)];
  }
  j["decision_freq"] = freq;
  j["decision_std_err"] = err;
  j["mean_stop"] = mean_stop;
  j["mean_stop_std_err"] = mean_stop_std_err;
  j["max_stop"] = max_stop;
  j["truncated"] = truncated;
  nlohmann::ordered_json qs;
  for (const auto& [q, v] : stop_quantiles) {
    char key[32];
    std::snprintf(key, sizeof key, "%g", q);
    qs[key] = v;
  }
  j["stop_quantiles"] = qs;
  return j.dump();
}

}  // namespace seqscan
