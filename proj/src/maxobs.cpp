#include "seqscan/maxobs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "seqscan/errors.hpp"

namespace seqscan {

namespace {

constexpr double kEndpointInset = 1e-12;
constexpr double kZTolerance = 1e-12;
constexpr int kMaxBisections = 200;

// ln of ((1-p)/(1-z))^(1-z) (p/z)^z, i.e. minus the Bernoulli divergence of z from p.
double log_curve(double z, double p) {
  return (1.0 - z) * std::log((1.0 - p) / (1.0 - z)) + z * std::log(p / z);
}

MaxObsResult finish(double z_star, double p0, double zeta_a) {
  const double m_star = std::log(zeta_a) / log_curve(z_star, p0);
  return {z_star, m_star, static_cast<int>(std::floor(m_star)) + 1};
}

}  // namespace

MaxObsResult solve_max_obs(const TestSpec& spec, const TunedParams& params) {
  const double p0 = spec.p0();
  const double p1 = spec.p1();
  const double ln_za = std::log(params.zeta_a());
  const double ln_zb = std::log(params.zeta_b());
  // Cross-multiplied form of ln g0(z) / ln g1(z) = ln(zeta a) / ln(zeta b).
  auto h = [&](double z) { return log_curve(z, p0) * ln_zb - log_curve(z, p1) * ln_za; };

  double lo = p0 + kEndpointInset;
  double hi = p1 - kEndpointInset;
  double h_lo = h(lo);
  const double h_hi = h(hi);
  if (h_lo == 0.0) return finish(lo, p0, params.zeta_a());
  if (h_hi == 0.0) return finish(hi, p0, params.zeta_a());
  if (std::signbit(h_lo) == std::signbit(h_hi)) {
    throw NoCrossing("no sign change of the boundary crossing equation on (p0, p1)");
  }
  for (int it = 0; it < kMaxBisections && hi - lo > kZTolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double h_mid = h(mid);
    if (h_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if (std::signbit(h_mid) == std::signbit(h_lo)) {
      lo = mid;
      h_lo = h_mid;
    } else {
      hi = mid;
    }
  }
  return finish(0.5 * (lo + hi), p0, params.zeta_a());
}

MaxObsResult closed_form_max_obs(const TestSpec& spec, double zeta_a) {
  if (!(zeta_a > 0.0 && zeta_a < 1.0)) throw std::invalid_argument("closed form needs 0 < zeta*a < 1");
  const double p0 = spec.p0();
  const double p1 = spec.p1();
  const double z_star =
      std::log((1.0 - p0) / (1.0 - p1)) / std::log((1.0 - p0) * p1 / ((1.0 - p1) * p0));
  return finish(z_star, p0, zeta_a);
}

}  // namespace seqscan
