#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "curtail/design.hpp"
#include "curtail/lattice.hpp"

namespace curtail {

/// Conditional power (probability of an eventual go decision under p1) at
/// every lattice point, together with the stopping status of each point and
/// whether it can be reached from (0, 0).
class CpMatrix {
 public:
  CpMatrix(DesignRealisation design, double p1, LatticeArray<double> cp,
           LatticeArray<PointStatus> status, LatticeArray<char> reachable);

  [[nodiscard]] const DesignRealisation& design() const { return design_; }
  [[nodiscard]] double p1() const { return p1_; }
  [[nodiscard]] int n() const { return design_.n; }

  [[nodiscard]] double cp(int s, int m) const { return cp_.at(s, m); }
  [[nodiscard]] PointStatus status(int s, int m) const { return status_.at(s, m); }
  [[nodiscard]] bool reachable(int s, int m) const { return reachable_.at(s, m) != 0; }

  /// Reachable stopping points.
  [[nodiscard]] bool terminal(int s, int m) const {
    return reachable(s, m) && status(s, m) != PointStatus::Continue;
  }

 private:
  DesignRealisation design_;
  double p1_;
  LatticeArray<double> cp_;
  LatticeArray<PointStatus> status_;
  LatticeArray<char> reachable_;
};

/// Stochastic stopping rule: stop for no-go iff D < theta_F, for go iff
/// D > theta_E. Equality continues.
inline PointStatus threshold_status(double d, double theta_f, double theta_e) {
  if (d < theta_f) return PointStatus::StopNoGo;
  if (d > theta_e) return PointStatus::StopGo;
  return PointStatus::Continue;
}

/// Conditional power without stochastic stopping. Thresholds on `design` are
/// ignored, so for SC/m-stage/block families this is the base (NSC) matrix.
CpMatrix cp_matrix_nsc(const DesignRealisation& design, double p1);

/// Conditional power with stochastic curtailment at theta_F / theta_E,
/// computed backwards from m = N so that curtailed points feed earlier ones.
/// Throws std::domain_error when theta_F >= theta_E.
CpMatrix cp_matrix_sc(const DesignRealisation& design, double p1);

/// Closed-form conditional power for a curtailed design without stochastic
/// stopping, written as negative-binomial sums. The two-stage branch sums over
/// the participant at which the (r1+1)-th response arrives before n1, then
/// needs r - r1 further responses by N. Not defined for Simon-with-go.
double cp_closed_form(const DesignRealisation& design, double p1, LatticePoint point);

/// Probability that the k-th success occurs on trial x + 1.
double negative_binomial_pmf(int x, int k, double p);

/// P(Bin(n, p) >= k).
double binomial_upper_tail(int n, int k, double p);

/// Sorted, deduplicated CP values over reachable points where the family
/// evaluates stochastic stopping (every point for other families), always
/// including 0 and 1. Values closer than kThetaTolerance are merged. Points in the last
/// `tail_skip` columns before N (m = N - 1, ..., N - tail_skip) contribute no
/// values; 0 keeps every point.
struct ThetaSet {
  std::vector<double> values;
  [[nodiscard]] std::size_t size() const { return values.size(); }
};

inline constexpr double kThetaTolerance = 1e-12;
inline constexpr int kDefaultThetaTailSkip = 2;

ThetaSet theta_set(const CpMatrix& base, int tail_skip = kDefaultThetaTailSkip);
/// Shared helper: sort, merge within tolerance, and make sure 0 and 1 appear.
ThetaSet make_theta_set(std::vector<double> values);

struct ThetaConstraints {
  std::optional<double> theta_f_below;  // theta_F < bound
  double theta_e_min = 0.0;             // theta_E >= bound
};

/// All ordered pairs (theta_F, theta_E) from the set with theta_F < theta_E
/// that satisfy the constraints.
std::vector<std::pair<double, double>> theta_pairs(const ThetaSet& theta, const ThetaConstraints& c);

/// Number of pairs theta_pairs would return, without materialising them.
std::int64_t count_theta_pairs(const ThetaSet& theta, const ThetaConstraints& c);

/// Published counting formulas for the number of CP values of uncurtailed
/// lattices; see the README for how these relate to theta_set().
std::int64_t cp_count_formula_single(int r, int n);
std::int64_t cp_count_formula_two_stage(int r1, int n1, int r, int n);

}  // namespace curtail
