#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "curtail/cp.hpp"
#include "curtail/design.hpp"
#include "curtail/exact.hpp"

namespace curtail::testing {

/// Published thresholds carry three decimals. Replace them by the elements of
/// the design's theta set within half a unit of the last digit whose
/// characteristics reproduce the printed expected sample sizes (to within
/// `tol`) while staying feasible; nullopt when no such pair exists.
inline std::optional<DesignRealisation> snap_thresholds(const DesignRealisation& printed, const DesignParams& params,
                                                        double ess0, double ess1, double tol = 0.05,
                                                        bool require_feasible = true) {
  if (!printed.family.stochastic()) return printed;
  const CharacteristicsKernel kernel(printed.without_thresholds(), params);
  const auto theta = kernel.base_theta_set(0).values;
  std::optional<DesignRealisation> best;
  double best_err = 1e300;
  for (double tf : theta) {
    if (std::fabs(tf - printed.theta_f) > 0.0005 + 1e-12) continue;
    for (double te : theta) {
      if (te <= tf || std::fabs(te - printed.theta_e) > 0.0005 + 1e-12) continue;
      const OperatingCharacteristics oc = kernel.evaluate(tf, te);
      if (require_feasible && !oc.feasible(params)) continue;
      const double err = std::max(std::fabs(oc.ess0 - ess0), std::fabs(oc.ess1 - ess1));
      if (err <= tol && err < best_err) {
        best_err = err;
        DesignRealisation d = printed;
        d.theta_f = tf;
        d.theta_e = te;
        best = d;
      }
    }
  }
  return best;
}

/// Thresholds placed around the conditional power at the origin, so the
/// design never stops before the first participant.
inline DesignRealisation around_origin(DesignRealisation d, double below, double above) {
  const double cp0 = cp_matrix_nsc(d.without_thresholds(), 0.3).cp(0, 0);
  d.theta_e = cp0 + above * (1.0 - cp0);
  for (;; below *= 0.5) {
    d.theta_f = below * cp0;
    if (cp_matrix_sc(d, 0.3).status(0, 0) == PointStatus::Continue) return d;
  }
}

/// Representative designs of every family on a small lattice.
inline std::vector<DesignRealisation> small_designs(int n) {
  const int n1 = n / 2;
  const int r1 = 1;
  const int r = n / 3;
  return {
      make_single_stage(r, n),
      make_simon(r1, n1, r, n),
      make_simon_go(r1, r1 + 2, n1, r, n),
      make_nsc(r1, n1, r, n),
      around_origin(make_sc(r1, n1, r, n, 0, 1), 0.5, 0.6),
      around_origin(make_m_stage(r, n, 0, 1), 0.4, 0.8),
      around_origin(make_block(2, r, n - n % 2, 0, 1), 0.6, 0.5),
  };
}

}  // namespace curtail::testing
