#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "seqscan/stats_core.hpp"

namespace seqscan {

// Exact error probabilities at the design points:
// Pr{benign | p0} (reject H0) and Pr{scanner | p1} (reject H1).
struct DesignRisks {
  double reject_h0_at_p0;
  double reject_h1_at_p1;
};

DesignRisks risks_at_design_points(const TestSpec& spec, const TunedParams& params);

// A = alpha / Pr{reject H0 | p0}, B = beta / Pr{reject H1 | p1}.
// A zero risk maps to +infinity.
struct RiskRatios {
  double A;
  double B;
  double Q() const;
  double R() const;
};

RiskRatios risk_ratios(const TestSpec& spec, const TunedParams& params);

struct TuneIterate {
  int k;
  double a;          // coefficients entering the iteration
  double b;
  double zeta_star;  // bisected risk tuning parameter
  double A;
  double B;
  double Q;
  double absorbed_a() const { return zeta_star * a; }
  double absorbed_b() const { return zeta_star * b; }
};

struct TuneDiagnostics {
  double A = 0.0;
  double B = 0.0;
  double Q = 0.0;
  double R = 0.0;
  std::vector<TuneIterate> trace;
  int evaluations = 0;  // number of (a, b, zeta) candidates evaluated exactly

  // `k,a,b,zeta_star,A,B,Q`
  void write_trace_csv(std::ostream& os) const;
};

struct ZetaSearch {
  double zeta_star;
  double zeta_upper;   // end of the final bracket: infeasible, or the untested top 2 * 2^-i
  bool upper_tested;
  TuneDiagnostics diagnostics;
};

inline constexpr int kZetaScanMaxExponent = 60;
inline constexpr double kZetaRelativeTolerance = 1e-6;
inline constexpr int kZetaMaxBisections = 200;

// Largest zeta keeping R >= 1 for fixed (a, b): scan zeta = 2^-i for
// i = 0..60, then bisect in [2^-i, 2^-i+1). Throws InfeasibleTuning when no
// scanned value is feasible.
ZetaSearch bisect_zeta(const TestSpec& spec, double a, double b);

// How the dominant coefficient is updated between iterations.
enum class CoefficientUpdate {
  // Both coefficients absorb zeta*; the one attaining Q* is additionally
  // scaled by 1 + (Q*-1)/5.
  rescale_both,
  // Only the coefficient attaining Q* is rewritten as zeta* x (1 + (Q*-1)/5);
  // the other keeps its unscaled value.
  dominant_only,
};

struct MinimaxOptions {
  CoefficientUpdate update = CoefficientUpdate::rescale_both;
  double equality_tolerance = 1e-9;  // |A* - Q*| <= tol * max(1, Q*)
};

// Iterative minimax tuning: minimise Q subject to R >= 1, starting from
// a = alpha, b = beta, for k_max iterations. Returns zeta = 1 with the best
// absorbed coefficients (zeta* a, zeta* b).
std::pair<TunedParams, TuneDiagnostics> minimax_tune(const TestSpec& spec, int k_max,
                                                     const MinimaxOptions& options = {});

}  // namespace seqscan
