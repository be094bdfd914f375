#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "curtail/cp.hpp"
#include "curtail/exact.hpp"

namespace curtail {

enum class EstimatorKind : std::uint8_t { Naive, BiasSubtracted, BiasAdjusted, MUE, UMVUE };

inline constexpr std::size_t kEstimatorCount = 5;
inline constexpr std::array<EstimatorKind, kEstimatorCount> kAllEstimators{
    EstimatorKind::Naive, EstimatorKind::BiasSubtracted, EstimatorKind::BiasAdjusted, EstimatorKind::MUE,
    EstimatorKind::UMVUE};

std::string to_string(EstimatorKind kind);

/// How terminals whose UMVUE equals the observed one enter the MUE p-value.
enum class MueTies : std::uint8_t {
  HalfOthers,    // 1/2 weight on other tied terminals, observed excluded
  MidP,          // 1/2 weight on every tied terminal, observed included
  Inclusive,     // full weight on every tied terminal, observed included
};

struct TerminalEstimates {
  LatticePoint point;
  Decision decision = Decision::NoGo;
  double path_count = 0.0;  // number of truncated paths ending here
  std::array<double, kEstimatorCount> value{};
  /// Set when the value came from a fallback (no root, boundary or clipping).
  std::array<bool, kEstimatorCount> flagged{};

  [[nodiscard]] double get(EstimatorKind k) const { return value[static_cast<std::size_t>(k)]; }
};

/// Point estimates of the response rate at every terminal of one design.
class EstimateTable {
 public:
  /// `governing` must carry the design's stopping rules (thresholds applied).
  explicit EstimateTable(const CpMatrix& governing, MueTies ties = MueTies::MidP);

  [[nodiscard]] const DesignRealisation& design() const { return design_; }
  [[nodiscard]] const std::vector<TerminalEstimates>& terminals() const { return terminals_; }
  [[nodiscard]] std::size_t clipped() const { return clipped_; }

  /// Terminal probabilities at response rate p, in terminals() order.
  [[nodiscard]] std::vector<double> terminal_probabilities(double p) const;

  /// E(estimate | p), summed over terminals.
  [[nodiscard]] double expected_estimate(EstimatorKind kind, double p) const;

  /// Bias of the naive estimator at p.
  [[nodiscard]] double naive_bias(double p) const;

  /// MUE p-value of terminal `index` at response rate p.
  [[nodiscard]] double mue_p_value(std::size_t index, double p) const;

 private:
  void compute_bias_subtracted();
  void compute_bias_adjusted();
  void compute_mue();

  DesignRealisation design_;
  MueTies ties_;
  std::vector<TerminalEstimates> terminals_;
  // UMVUE order: tie_rank_[i] groups terminals with exactly equal UMVUE.
  std::vector<std::size_t> tie_rank_;
  std::size_t clipped_ = 0;
};

double expected_estimate(const EstimateTable& table, EstimatorKind kind, double p);

struct AccuracyCurve {
  EstimatorKind kind = EstimatorKind::Naive;
  std::vector<double> bias;
  std::vector<double> variance;
  std::vector<double> rmse;
  double max_abs_bias = 0.0;
  double max_rmse = 0.0;
};

struct AccuracyCurves {
  std::vector<double> p_grid;
  std::array<AccuracyCurve, kEstimatorCount> curves;

  [[nodiscard]] const AccuracyCurve& curve(EstimatorKind k) const { return curves[static_cast<std::size_t>(k)]; }
};

/// Exact bias, variance and RMSE on the grid 0, step, ..., 1.
AccuracyCurves accuracy_curves(const EstimateTable& table, double step = 0.01);

}  // namespace curtail
