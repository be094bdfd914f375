#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "curtail/cp.hpp"
#include "curtail/design.hpp"

namespace curtail {

enum class Decision : std::uint8_t { Go, NoGo };

struct Terminal {
  LatticePoint point;
  Decision decision = Decision::NoGo;
  double prob = 0.0;
};

/// Every reachable stopping point of a design with its exact probability
/// under response rate `p`. Terminals are ordered by (m, s).
struct TerminalDistribution {
  DesignRealisation design;
  double p = 0.0;
  std::vector<Terminal> terminals;

  [[nodiscard]] double go_probability() const;
  [[nodiscard]] double total_probability() const;
  [[nodiscard]] double expected_sample_size() const;
};

/// Forward pass from (0, 0): mass flows through continue points and is
/// absorbed at terminal points.
TerminalDistribution terminal_distribution(const CpMatrix& cpm, double p);

struct OperatingCharacteristics {
  double alpha = 0.0;
  double power = 0.0;
  double ess0 = 0.0;
  double ess1 = 0.0;
  int n_max = 0;

  /// alpha <= nominal alpha and power >= 1 - nominal beta, at full precision.
  [[nodiscard]] bool feasible(const DesignParams& params) const;
};

/// Builds the governing CP matrix (thresholds applied for stochastic
/// families) and evaluates it at p0 and p1.
OperatingCharacteristics operating_characteristics(const DesignRealisation& design, const DesignParams& params);
OperatingCharacteristics operating_characteristics(const CpMatrix& governing, const DesignParams& params);

using BigCount = boost::multiprecision::cpp_int;

struct TerminalPaths {
  LatticePoint point;
  Decision decision = Decision::NoGo;
  BigCount total;
  BigCount via_first_response;
};

/// Number of response sequences (truncated at their stopping point) that end
/// at each terminal, and how many of them start with a response.
struct PathCounts {
  std::vector<TerminalPaths> terminals;
};

PathCounts path_counts(const CpMatrix& cpm);

/// Operating characteristics of one set of boundaries under many threshold
/// pairs. A single backward sweep over rows s <= r yields conditional power,
/// the go probability under p0 and expected remaining sample sizes, so each
/// evaluation costs O(N r) with no allocation.
class CharacteristicsKernel {
 public:
  CharacteristicsKernel(const DesignRealisation& boundaries, const DesignParams& params);

  /// Thresholds are ignored for families without stochastic stopping.
  [[nodiscard]] OperatingCharacteristics evaluate(double theta_f, double theta_e) const;

  /// CP values at reachable continue points of the base (threshold-free)
  /// lattice, merged into a theta set; see theta_set() for `tail_skip`.
  [[nodiscard]] ThetaSet base_theta_set(int tail_skip = kDefaultThetaTailSkip) const;

  [[nodiscard]] const DesignRealisation& boundaries() const { return design_; }

 private:
  enum Code : std::uint8_t { kMonitored, kUnmonitored, kNoGo, kGo };

  [[nodiscard]] std::uint8_t code(int s, int m) const { return codes_[static_cast<std::size_t>(m) * rows_ + s]; }

  DesignRealisation design_;
  DesignParams params_;
  int rows_ = 0;
  std::vector<std::uint8_t> codes_;
  mutable std::vector<double> buffer_;
};

}  // namespace curtail
