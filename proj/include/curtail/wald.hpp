#pragma once

#include "curtail/design.hpp"

namespace curtail {

/// Sequential probability ratio test boundaries on the response count:
/// stop for no-go once S_m <= intercept_no_go + slope m, for go once
/// S_m >= intercept_go + slope m. Natural logarithms throughout.
struct WaldBoundaries {
  DesignParams params;
  double d = 0.0;  // log(p1/p0) - log((1-p1)/(1-p0))
  double intercept_no_go = 0.0;
  double intercept_go = 0.0;
  double slope = 0.0;

  [[nodiscard]] double no_go(double m) const { return intercept_no_go + slope * m; }
  [[nodiscard]] double go(double m) const { return intercept_go + slope * m; }
};

/// Throws std::domain_error for invalid parameters.
WaldBoundaries wald_boundaries(const DesignParams& params);

struct WaldExpectedSize {
  double ess0 = 0.0;
  double ess1 = 0.0;
};

/// Wald's approximations to the expected sample size under p0 and p1.
WaldExpectedSize wald_ess(const DesignParams& params);

}  // namespace curtail
