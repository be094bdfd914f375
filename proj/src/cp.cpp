#include "curtail/cp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curtail {

CpMatrix::CpMatrix(DesignRealisation design, double p1, LatticeArray<double> cp,
                   LatticeArray<PointStatus> status, LatticeArray<char> reachable)
    : design_(std::move(design)),
      p1_(p1),
      cp_(std::move(cp)),
      status_(std::move(status)),
      reachable_(std::move(reachable)) {}

namespace {

CpMatrix build(const DesignRealisation& design, double p1, bool stochastic) {
  design.validate();
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::domain_error("p1 must lie in [0, 1]");
  const int n = design.n;
  LatticeArray<double> cp(n, 0.0);
  LatticeArray<PointStatus> status(n, PointStatus::StopNoGo);
  const bool apply = stochastic && design.family.stochastic();

  for (int m = n; m >= 0; --m) {
    for (int s = 0; s <= m; ++s) {
      PointStatus st = base_status(design, {s, m});
      double value = 0.0;
      if (st == PointStatus::Continue) {
        const double d = p1 * cp(s + 1, m + 1) + (1.0 - p1) * cp(s, m + 1);
        if (apply && design.family.monitors(m, n)) st = threshold_status(d, design.theta_f, design.theta_e);
        value = st == PointStatus::Continue ? d : (st == PointStatus::StopGo ? 1.0 : 0.0);
      } else {
        value = st == PointStatus::StopGo ? 1.0 : 0.0;
      }
      cp(s, m) = value;
      status(s, m) = st;
    }
  }

  LatticeArray<char> reachable(n, 0);
  reachable(0, 0) = 1;
  for (int m = 0; m < n; ++m) {
    for (int s = 0; s <= m; ++s) {
      if (reachable(s, m) && status(s, m) == PointStatus::Continue) {
        reachable(s, m + 1) = 1;
        reachable(s + 1, m + 1) = 1;
      }
    }
  }
  return CpMatrix(design, p1, std::move(cp), std::move(status), std::move(reachable));
}

double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

CpMatrix cp_matrix_nsc(const DesignRealisation& design, double p1) {
  return build(design.without_thresholds(), p1, false);
}

CpMatrix cp_matrix_sc(const DesignRealisation& design, double p1) {
  if (design.theta_f >= design.theta_e) throw std::domain_error("theta_F must be smaller than theta_E");
  return build(design, p1, true);
}

double negative_binomial_pmf(int x, int k, double p) {
  if (k <= 0) return x == -1 ? 1.0 : 0.0;
  if (x < k - 1) return 0.0;
  return choose(x, k - 1) * std::pow(p, k) * std::pow(1.0 - p, x - (k - 1));
}

double binomial_upper_tail(int n, int k, double p) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  // Sum over the trial on which the k-th success arrives.
  double total = 0.0;
  for (int x = k - 1; x <= n - 1; ++x) total += negative_binomial_pmf(x, k, p);
  return total;
}

double cp_closed_form(const DesignRealisation& design, double p1, LatticePoint pt) {
  design.validate();
  if (design.family.kind == FamilyKind::SimonGo) {
    throw std::domain_error("closed-form conditional power is not defined for Simon-with-go");
  }
  const int s = pt.s;
  const int m = pt.m;
  const int n = design.n;
  const int r = design.r;
  if (s < 0 || m < 0 || s > m || m > n) throw std::domain_error("lattice point outside 0 <= s <= m <= N");

  if (s > r) return 1.0;
  if (m - s > n - r - 1) return 0.0;
  if (design.n1) {
    const int n1 = *design.n1;
    const int r1 = *design.r1;
    if (m <= n1 && m - s > n1 - r1 - 1) return 0.0;
    if (m < n1 && s <= r1) {
      // j + 1 further participants bring the (r1 + 1)-th response.
      double total = 0.0;
      for (int j = r1 - s; j <= n1 - m - 1; ++j) {
        total += negative_binomial_pmf(j, r1 - s + 1, p1) * binomial_upper_tail(n - (j + m + 1), r - r1, p1);
      }
      return total;
    }
  }
  return binomial_upper_tail(n - m, r + 1 - s, p1);
}

ThetaSet make_theta_set(std::vector<double> values) {
  values.push_back(0.0);
  values.push_back(1.0);
  std::sort(values.begin(), values.end());
  ThetaSet set;
  set.values.reserve(values.size());
  for (double v : values) {
    if (set.values.empty() || v - set.values.back() > kThetaTolerance) set.values.push_back(v);
  }
  // 1 must survive as the top element even if a value within tolerance preceded it.
  if (set.values.back() != 1.0) set.values.back() = 1.0;
  return set;
}

ThetaSet theta_set(const CpMatrix& base, int tail_skip) {
  if (tail_skip < 0) throw std::domain_error("tail_skip must be nonnegative");
  std::vector<double> values;
  const DesignFamily& family = base.design().family;
  for (int m = 0; m <= base.n() - 1 - tail_skip; ++m) {
    if (family.stochastic() && !family.monitors(m, base.n())) continue;
    for (int s = 0; s <= m; ++s) {
      if (base.reachable(s, m)) values.push_back(base.cp(s, m));
    }
  }
  return make_theta_set(std::move(values));
}

namespace {

// Index ranges [0, f_end) for theta_F and [e_begin, size) for theta_E.
std::pair<std::size_t, std::size_t> pair_bounds(const ThetaSet& theta, const ThetaConstraints& c) {
  const auto& v = theta.values;
  std::size_t f_end = v.size();
  if (c.theta_f_below) f_end = std::lower_bound(v.begin(), v.end(), *c.theta_f_below) - v.begin();
  const std::size_t e_begin = std::lower_bound(v.begin(), v.end(), c.theta_e_min) - v.begin();
  return {f_end, e_begin};
}

}  // namespace

std::vector<std::pair<double, double>> theta_pairs(const ThetaSet& theta, const ThetaConstraints& c) {
  const auto& v = theta.values;
  const auto [f_end, e_begin] = pair_bounds(theta, c);
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < f_end; ++i) {
    for (std::size_t j = std::max(i + 1, e_begin); j < v.size(); ++j) pairs.emplace_back(v[i], v[j]);
  }
  return pairs;
}

std::int64_t count_theta_pairs(const ThetaSet& theta, const ThetaConstraints& c) {
  const auto n = static_cast<std::int64_t>(theta.values.size());
  const auto [f_end, e_begin] = pair_bounds(theta, c);
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(f_end); ++i) {
    const std::int64_t first = std::max<std::int64_t>(i + 1, static_cast<std::int64_t>(e_begin));
    count += std::max<std::int64_t>(0, n - first);
  }
  return count;
}

std::int64_t cp_count_formula_single(int r, int n) {
  return static_cast<std::int64_t>(r + 1) * (n - r) + 1;
}

std::int64_t cp_count_formula_two_stage(int r1, int n1, int r, int n) {
  return static_cast<std::int64_t>(r1 + 1) * (n1 - r1) + static_cast<std::int64_t>(r - r1) * (n - r) - 1;
}

}  // namespace curtail
