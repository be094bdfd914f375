#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "curtail/design.hpp"
#include "curtail/exact.hpp"

namespace curtail::oracle {

inline constexpr int kBruteForceMaxN = 20;

/// Stopping status straight from the definitions: top-down memoised
/// conditional power with the design's thresholds, sharing no code with the
/// conditional-power engine beyond base_status.
class ReferenceRules {
 public:
  ReferenceRules(const DesignRealisation& design, double p1);

  [[nodiscard]] PointStatus status(int s, int m) const;
  [[nodiscard]] double cp(int s, int m) const;
  [[nodiscard]] const DesignRealisation& design() const { return design_; }

 private:
  double compute(int s, int m) const;

  DesignRealisation design_;
  double p1_;
  mutable std::map<std::pair<int, int>, std::pair<double, PointStatus>> memo_;
};

struct BruteForceResult {
  double go_probability = 0.0;
  double expected_sample_size = 0.0;
  /// Probability of each terminal point, keyed by (m, s).
  std::map<std::pair<int, int>, double> histogram;
  std::map<std::pair<int, int>, Decision> decisions;
  std::uint64_t truncated_paths = 0;
  /// Sum over distinct truncated paths of 2^(N - m); equals 2^N.
  std::uint64_t covered_sequences = 0;
};

/// Enumerates all 2^N response sequences. Throws std::domain_error for N > 20.
BruteForceResult brute_force(const DesignRealisation& design, double p1, double p);

struct MonteCarloResult {
  std::uint64_t n_sims = 0;
  std::uint64_t seed = 0;
  double go_rate = 0.0;
  double go_se = 0.0;
  double mean_size = 0.0;
  double size_se = 0.0;
};

/// Patient-by-patient simulation split over a fixed number of shards with
/// derived seeds, so results do not depend on `workers`.
MonteCarloResult monte_carlo(const DesignRealisation& design, double p1, double p, std::uint64_t n_sims,
                             std::uint64_t seed, int workers = 1);

enum class Method : std::uint8_t { BruteForce, MonteCarlo };

struct OracleReport {
  DesignRealisation design;
  Method method = Method::BruteForce;
  std::uint64_t n_sims = 0;
  std::uint64_t seed = 0;
  OperatingCharacteristics oracle;
  OperatingCharacteristics exact;
  /// Largest absolute difference over alpha, power, ess0, ess1.
  double discrepancy = 0.0;
  /// Largest discrepancy in units of the Monte-Carlo standard error (0 for brute force).
  double discrepancy_se = 0.0;
  [[nodiscard]] bool agrees() const;
};

OracleReport audit_brute_force(const DesignRealisation& design, const DesignParams& params);
OracleReport audit_monte_carlo(const DesignRealisation& design, const DesignParams& params, std::uint64_t n_sims,
                               std::uint64_t seed, int workers = 1);

}  // namespace curtail::oracle
