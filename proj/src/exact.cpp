#include "curtail/exact.hpp"

#include <algorithm>
#include <stdexcept>

namespace curtail {

namespace {

// Neumaier summation; the order of additions is fixed by the caller.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

Decision decision_of(PointStatus st) { return st == PointStatus::StopGo ? Decision::Go : Decision::NoGo; }

}  // namespace

double TerminalDistribution::go_probability() const {
  CompensatedSum sum;
  for (const auto& t : terminals) {
    if (t.decision == Decision::Go) sum.add(t.prob);
  }
  return sum.value();
}

double TerminalDistribution::total_probability() const {
  CompensatedSum sum;
  for (const auto& t : terminals) sum.add(t.prob);
  return sum.value();
}

double TerminalDistribution::expected_sample_size() const {
  CompensatedSum sum;
  for (const auto& t : terminals) sum.add(t.point.m * t.prob);
  return sum.value();
}

TerminalDistribution terminal_distribution(const CpMatrix& cpm, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("response rate must lie in [0, 1]");
  const int n = cpm.n();
  LatticeArray<double> reach(n, 0.0);
  reach(0, 0) = 1.0;
  TerminalDistribution dist{cpm.design(), p, {}};
  for (int m = 0; m <= n; ++m) {
    for (int s = 0; s <= m; ++s) {
      if (!cpm.reachable(s, m)) continue;
      const double mass = reach(s, m);
      const PointStatus st = cpm.status(s, m);
      if (st == PointStatus::Continue) {
        reach(s + 1, m + 1) += p * mass;
        reach(s, m + 1) += (1.0 - p) * mass;
      } else {
        dist.terminals.push_back({{s, m}, decision_of(st), mass});
      }
    }
  }
  return dist;
}

bool OperatingCharacteristics::feasible(const DesignParams& params) const {
  return alpha <= params.alpha && power >= 1.0 - params.beta;
}

OperatingCharacteristics operating_characteristics(const CpMatrix& governing, const DesignParams& params) {
  const auto at0 = terminal_distribution(governing, params.p0);
  const auto at1 = terminal_distribution(governing, params.p1);
  return {at0.go_probability(), at1.go_probability(), at0.expected_sample_size(), at1.expected_sample_size(),
          governing.n()};
}

OperatingCharacteristics operating_characteristics(const DesignRealisation& design, const DesignParams& params) {
  params.validate();
  return operating_characteristics(cp_matrix_sc(design, params.p1), params);
}

PathCounts path_counts(const CpMatrix& cpm) {
  const int n = cpm.n();
  LatticeArray<BigCount> total(n, BigCount(0));
  LatticeArray<BigCount> first(n, BigCount(0));
  total(0, 0) = 1;
  PathCounts counts;
  for (int m = 0; m <= n; ++m) {
    for (int s = 0; s <= m; ++s) {
      if (!cpm.reachable(s, m)) continue;
      const PointStatus st = cpm.status(s, m);
      if (m == 1 && s == 1) first(1, 1) = total(1, 1);
      if (st == PointStatus::Continue) {
        total(s + 1, m + 1) += total(s, m);
        total(s, m + 1) += total(s, m);
        first(s + 1, m + 1) += first(s, m);
        first(s, m + 1) += first(s, m);
      } else {
        counts.terminals.push_back({{s, m}, decision_of(st), total(s, m), first(s, m)});
      }
    }
  }
  return counts;
}

CharacteristicsKernel::CharacteristicsKernel(const DesignRealisation& boundaries, const DesignParams& params)
    : design_(boundaries), params_(params) {
  design_.validate();
  const int n = design_.n;
  // Curtailed families stop with a certain go as soon as s > r, so rows
  // above r never need explicit storage.
  rows_ = design_.family.curtailed() ? design_.r + 1 : n + 1;
  codes_.assign(static_cast<std::size_t>(n + 1) * rows_, kNoGo);
  for (int m = 0; m <= n; ++m) {
    for (int s = 0; s <= std::min(m, rows_ - 1); ++s) {
      const PointStatus st = base_status(design_, {s, m});
      std::uint8_t c = kNoGo;
      if (st == PointStatus::StopGo) {
        c = kGo;
      } else if (st == PointStatus::Continue) {
        c = design_.family.monitors(m, n) ? kMonitored : kUnmonitored;
      }
      codes_[static_cast<std::size_t>(m) * rows_ + s] = c;
    }
  }
  buffer_.assign(static_cast<std::size_t>(8) * (rows_ + 1), 0.0);
}

OperatingCharacteristics CharacteristicsKernel::evaluate(double theta_f, double theta_e) const {
  if (!design_.family.stochastic()) {
    theta_f = 0.0;
    theta_e = 1.0;
  }
  const int n = design_.n;
  const double p0 = params_.p0;
  const double q0 = 1.0 - p0;
  const double p1 = params_.p1;
  const double q1 = 1.0 - p1;
  const std::size_t width = rows_ + 1;

  // Two columns of (cp, go0, ess0, ess1); index rows_ is the certain-go row.
  double* next_cp = buffer_.data();
  double* next_g0 = next_cp + width;
  double* next_e0 = next_g0 + width;
  double* next_e1 = next_e0 + width;
  double* cur_cp = next_e1 + width;
  double* cur_g0 = cur_cp + width;
  double* cur_e0 = cur_g0 + width;
  double* cur_e1 = cur_e0 + width;

  for (double* col : {next_cp, cur_cp, next_g0, cur_g0}) col[rows_] = 1.0;
  for (double* col : {next_e0, cur_e0, next_e1, cur_e1}) col[rows_] = 0.0;

  for (int m = n; m >= 0; --m) {
    const int top = std::min(m, rows_ - 1);
    const std::uint8_t* codes = codes_.data() + static_cast<std::size_t>(m) * rows_;
    for (int s = 0; s <= top; ++s) {
      const std::uint8_t c = codes[s];
      if (c == kGo) {
        cur_cp[s] = 1.0;
        cur_g0[s] = 1.0;
        cur_e0[s] = 0.0;
        cur_e1[s] = 0.0;
        continue;
      }
      if (c == kNoGo) {
        cur_cp[s] = 0.0;
        cur_g0[s] = 0.0;
        cur_e0[s] = 0.0;
        cur_e1[s] = 0.0;
        continue;
      }
      const double d = p1 * next_cp[s + 1] + q1 * next_cp[s];
      if (c == kMonitored) {
        if (d < theta_f) {
          cur_cp[s] = 0.0;
          cur_g0[s] = 0.0;
          cur_e0[s] = 0.0;
          cur_e1[s] = 0.0;
          continue;
        }
        if (d > theta_e) {
          cur_cp[s] = 1.0;
          cur_g0[s] = 1.0;
          cur_e0[s] = 0.0;
          cur_e1[s] = 0.0;
          continue;
        }
      }
      cur_cp[s] = d;
      cur_g0[s] = p0 * next_g0[s + 1] + q0 * next_g0[s];
      cur_e0[s] = 1.0 + p0 * next_e0[s + 1] + q0 * next_e0[s];
      cur_e1[s] = 1.0 + p1 * next_e1[s + 1] + q1 * next_e1[s];
    }
    // When m < rows_ - 1, row m + 1 of the previous column is unreachable
    // from column m; rows above top are left untouched.
    std::swap(next_cp, cur_cp);
    std::swap(next_g0, cur_g0);
    std::swap(next_e0, cur_e0);
    std::swap(next_e1, cur_e1);
  }
  return {next_g0[0], next_cp[0], next_e0[0], next_e1[0], n};
}

ThetaSet CharacteristicsKernel::base_theta_set(int tail_skip) const {
  if (tail_skip < 0) throw std::domain_error("tail_skip must be nonnegative");
  const int n = design_.n;
  const double p1 = params_.p1;
  const std::size_t stride = rows_ + 1;
  std::vector<double> cp(static_cast<std::size_t>(n + 1) * stride, 0.0);
  auto at = [&](int s, int m) -> double& { return cp[static_cast<std::size_t>(m) * stride + s]; };
  for (int m = n; m >= 0; --m) {
    at(rows_, m) = 1.0;
    for (int s = 0; s <= std::min(m, rows_ - 1); ++s) {
      const std::uint8_t c = code(s, m);
      if (c == kGo) {
        at(s, m) = 1.0;
      } else if (c == kNoGo) {
        at(s, m) = 0.0;
      } else {
        at(s, m) = p1 * at(s + 1, m + 1) + (1.0 - p1) * at(s, m + 1);
      }
    }
  }
  std::vector<char> reach(cp.size(), 0);
  reach[0] = 1;
  std::vector<double> values;
  for (int m = 0; m < n; ++m) {
    for (int s = 0; s <= std::min(m, rows_ - 1); ++s) {
      const std::size_t idx = static_cast<std::size_t>(m) * stride + s;
      if (!reach[idx]) continue;
      const std::uint8_t c = code(s, m);
      if (c != kMonitored && c != kUnmonitored) continue;
      const bool contributes = c == kMonitored || !design_.family.stochastic();
      if (contributes && m <= n - 1 - tail_skip) values.push_back(cp[idx]);
      reach[idx + stride] = 1;
      reach[idx + stride + 1] = 1;
    }
  }
  return make_theta_set(std::move(values));
}

}  // namespace curtail
