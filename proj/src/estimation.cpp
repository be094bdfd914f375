#include "curtail/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace curtail {

namespace {

constexpr double kRootTolerance = 1e-8;
constexpr int kMaxIterations = 200;
constexpr double kFallbackStep = 1e-4;

std::size_t idx(EstimatorKind k) { return static_cast<std::size_t>(k); }

double path_probability(double count, int s, int m, double p) {
  // std::pow(0, 0) == 1, which is the convention needed at p in {0, 1}.
  return count * std::pow(p, s) * std::pow(1.0 - p, m - s);
}

struct RootResult {
  double value = 0.0;
  bool flagged = false;
};

// Root of an increasing function on [0, 1]. Without a sign change the
// minimiser of |f| on a fine grid is returned and flagged.
template <typename F>
RootResult increasing_root(F f) {
  double lo = 0.0;
  double hi = 1.0;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, false};
  if (f_hi == 0.0) return {hi, false};
  if (f_lo > 0.0 || f_hi < 0.0) {
    double best = 0.0;
    double best_abs = std::abs(f_lo);
    const int steps = static_cast<int>(std::lround(1.0 / kFallbackStep));
    for (int i = 1; i <= steps; ++i) {
      const double x = i * kFallbackStep;
      const double v = std::abs(f(x));
      if (v < best_abs) {
        best_abs = v;
        best = x;
      }
    }
    return {best, true};
  }
  int it = 0;
  while (hi - lo > kRootTolerance && it < kMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++it;
  }
  return {0.5 * (lo + hi), hi - lo > kRootTolerance};
}

}  // namespace

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Naive: return "naive";
    case EstimatorKind::BiasSubtracted: return "bias_subtracted";
    case EstimatorKind::BiasAdjusted: return "bias_adjusted";
    case EstimatorKind::MUE: return "mue";
    case EstimatorKind::UMVUE: return "umvue";
  }
  return "unknown";
}

EstimateTable::EstimateTable(const CpMatrix& governing, MueTies ties) : design_(governing.design()), ties_(ties) {
  const PathCounts counts = path_counts(governing);
  std::vector<const TerminalPaths*> kept;
  for (const TerminalPaths& t : counts.terminals) {
    if (t.total == 0) continue;
    if (t.point.m == 0) throw std::domain_error("design stops before the first participant");
    kept.push_back(&t);
    TerminalEstimates e;
    e.point = t.point;
    e.decision = t.decision;
    e.path_count = t.total.convert_to<double>();
    e.value[idx(EstimatorKind::Naive)] = static_cast<double>(t.point.s) / t.point.m;
    e.value[idx(EstimatorKind::UMVUE)] = t.via_first_response.convert_to<double>() / e.path_count;
    terminals_.push_back(e);
  }

  // Rank terminals by exact UMVUE (a/b vs c/d through cross products).
  std::vector<std::size_t> order(kept.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto cmp = [&](std::size_t i, std::size_t j) {
    const BigCount lhs = kept[i]->via_first_response * kept[j]->total;
    const BigCount rhs = kept[j]->via_first_response * kept[i]->total;
    return lhs < rhs;
  };
  std::stable_sort(order.begin(), order.end(), cmp);
  tie_rank_.assign(kept.size(), 0);
  std::size_t rank = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && cmp(order[k - 1], order[k])) ++rank;
    tie_rank_[order[k]] = rank;
  }

  compute_bias_subtracted();
  compute_bias_adjusted();
  compute_mue();
}

std::vector<double> EstimateTable::terminal_probabilities(double p) const {
  std::vector<double> probs(terminals_.size());
  for (std::size_t i = 0; i < terminals_.size(); ++i) {
    const TerminalEstimates& t = terminals_[i];
    probs[i] = path_probability(t.path_count, t.point.s, t.point.m, p);
  }
  return probs;
}

double EstimateTable::expected_estimate(EstimatorKind kind, double p) const {
  if (p < 0.0 || p > 1.0) throw std::domain_error("response rate must lie in [0, 1]");
  double total = 0.0;
  for (const TerminalEstimates& t : terminals_) {
    total += t.get(kind) * path_probability(t.path_count, t.point.s, t.point.m, p);
  }
  return total;
}

double EstimateTable::naive_bias(double p) const { return expected_estimate(EstimatorKind::Naive, p) - p; }

double EstimateTable::mue_p_value(std::size_t index, double p) const {
  const std::size_t own = tie_rank_.at(index);
  double above = 0.0;
  double tied = 0.0;
  for (std::size_t u = 0; u < terminals_.size(); ++u) {
    const double pr = path_probability(terminals_[u].path_count, terminals_[u].point.s, terminals_[u].point.m, p);
    if (tie_rank_[u] > own) {
      above += pr;
    } else if (tie_rank_[u] == own) {
      if (u == index && ties_ == MueTies::HalfOthers) continue;
      tied += pr;
    }
  }
  return above + (ties_ == MueTies::Inclusive ? tied : 0.5 * tied);
}

void EstimateTable::compute_bias_subtracted() {
  for (TerminalEstimates& t : terminals_) {
    const double naive = t.get(EstimatorKind::Naive);
    double v = naive - naive_bias(naive);
    if (v < 0.0 || v > 1.0) {
      v = std::clamp(v, 0.0, 1.0);
      t.flagged[idx(EstimatorKind::BiasSubtracted)] = true;
      ++clipped_;
    }
    t.value[idx(EstimatorKind::BiasSubtracted)] = v;
  }
}

void EstimateTable::compute_bias_adjusted() {
  for (TerminalEstimates& t : terminals_) {
    const double naive = t.get(EstimatorKind::Naive);
    const RootResult root =
        increasing_root([&](double x) { return expected_estimate(EstimatorKind::Naive, x) - naive; });
    t.value[idx(EstimatorKind::BiasAdjusted)] = std::clamp(root.value, 0.0, 1.0);
    t.flagged[idx(EstimatorKind::BiasAdjusted)] = root.flagged;
  }
}

void EstimateTable::compute_mue() {
  for (std::size_t i = 0; i < terminals_.size(); ++i) {
    TerminalEstimates& t = terminals_[i];
    const double at0 = mue_p_value(i, 0.0);
    const double at1 = mue_p_value(i, 1.0);
    if (at0 >= 0.5) {
      t.value[idx(EstimatorKind::MUE)] = 0.0;
      t.flagged[idx(EstimatorKind::MUE)] = at0 > 0.5;
      continue;
    }
    if (at1 <= 0.5) {
      t.value[idx(EstimatorKind::MUE)] = 1.0;
      t.flagged[idx(EstimatorKind::MUE)] = at1 < 0.5;
      continue;
    }
    const RootResult root = increasing_root([&](double x) { return mue_p_value(i, x) - 0.5; });
    t.value[idx(EstimatorKind::MUE)] = root.value;
    t.flagged[idx(EstimatorKind::MUE)] = root.flagged;
  }
}

double expected_estimate(const EstimateTable& table, EstimatorKind kind, double p) {
  return table.expected_estimate(kind, p);
}

AccuracyCurves accuracy_curves(const EstimateTable& table, double step) {
  if (!(step > 0.0) || step > 1.0) throw std::domain_error("grid step must lie in (0, 1]");
  AccuracyCurves out;
  const int points = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= points; ++i) out.p_grid.push_back(std::min(1.0, i * step));
  for (std::size_t k = 0; k < kEstimatorCount; ++k) {
    AccuracyCurve& c = out.curves[k];
    c.kind = kAllEstimators[k];
    c.bias.reserve(out.p_grid.size());
    c.variance.reserve(out.p_grid.size());
    c.rmse.reserve(out.p_grid.size());
  }
  const auto& terms = table.terminals();
  for (double p : out.p_grid) {
    const std::vector<double> probs = table.terminal_probabilities(p);
    for (std::size_t k = 0; k < kEstimatorCount; ++k) {
      double mean = 0.0;
      for (std::size_t t = 0; t < terms.size(); ++t) mean += probs[t] * terms[t].value[k];
      double var = 0.0;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const double d = terms[t].value[k] - mean;
        var += probs[t] * d * d;
      }
      AccuracyCurve& c = out.curves[k];
      const double bias = mean - p;
      c.bias.push_back(bias);
      c.variance.push_back(var);
      c.rmse.push_back(std::sqrt(bias * bias + var));
      c.max_abs_bias = std::max(c.max_abs_bias, std::abs(bias));
      c.max_rmse = std::max(c.max_rmse, c.rmse.back());
    }
  }
  return out;
}

}  // namespace curtail
