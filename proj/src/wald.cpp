#include "curtail/wald.hpp"

#include <cmath>

namespace curtail {

WaldBoundaries wald_boundaries(const DesignParams& params) {
  params.validate();
  const double a = params.alpha;
  const double b = params.beta;
  const double p0 = params.p0;
  const double p1 = params.p1;
  const double d = std::log(p1 / p0) - std::log((1.0 - p1) / (1.0 - p0));
  const double slope = std::log((1.0 - p0) / (1.0 - p1)) / d;
  return {params, d, std::log(b / (1.0 - a)) / d, std::log((1.0 - b) / a) / d, slope};
}

WaldExpectedSize wald_ess(const DesignParams& params) {
  params.validate();
  const double a = params.alpha;
  const double b = params.beta;
  const double p0 = params.p0;
  const double p1 = params.p1;
  const double log_lower = std::log(b / (1.0 - a));
  const double log_upper = std::log((1.0 - b) / a);
  const double log_ratio_response = std::log(p1 / p0);
  const double log_ratio_failure = std::log((1.0 - p1) / (1.0 - p0));
  const double ess0 = ((1.0 - a) * log_lower + a * log_upper) /
                      (p0 * log_ratio_response + (1.0 - p0) * log_ratio_failure);
  const double ess1 = (b * log_lower + (1.0 - b) * log_upper) /
                      (p1 * log_ratio_response + (1.0 - p1) * log_ratio_failure);
  return {ess0, ess1};
}

}  // namespace curtail
