#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curtail/design.hpp"
#include "curtail/exact.hpp"

namespace curtail {

enum class RBoundRule { AHern, Wald };
enum class DominanceMode { Rounded, Exact };
enum class Criterion { H0Optimal, H1Optimal, H0Minimax, H1Minimax };

std::string to_string(Criterion c);
Criterion parse_criterion(std::string_view text);
const std::vector<Criterion>& all_criteria();

struct SearchConfig {
  DesignParams params;
  int n_min = 1;
  int n_max = 80;
  /// Per-family override of n_max, keyed by DesignFamily::name().
  std::map<std::string, int> n_max_by_family;
  RBoundRule r_rule = RBoundRule::AHern;
  double theta_e_min = 0.95;
  /// Final lattice columns left out of each candidate's theta set.
  int theta_tail_skip = kDefaultThetaTailSkip;
  /// theta_F < p1 for families that monitor after every participant.
  bool theta_f_below_p1 = true;
  double weight_grid_step = 0.01;
  std::vector<DesignFamily> families;
  DesignFamily reference_family = DesignFamily::simon();
  DominanceMode dominance = DominanceMode::Exact;
  /// Simon and Simon-with-go are capped at this multiple of the H0-optimal
  /// Simon N (two-pass search in search_all).
  double simon_cap_factor = 1.2;
  int workers = 1;

  void validate() const;
  [[nodiscard]] int n_max_for(const DesignFamily& family) const;
};

struct IntRange {
  int lo = 0;
  int hi = -1;
  [[nodiscard]] bool empty() const { return hi < lo; }
};

/// Candidate final boundaries r for a given N. An empty range means there
/// are no candidates at this N.
IntRange r_bounds(int n, const DesignParams& params, RBoundRule rule);

/// Approximate single-stage boundary N (p0 + z_a / (z_a + z_{1-b}) (p1 - p0)).
double ahern_point_boundary(int n, const DesignParams& params);

/// All boundary combinations for one family in lexicographic
/// (N, r, n1, r1, e1) order, with thresholds left at (0, 1).
std::vector<DesignRealisation> enumerate_candidates(const SearchConfig& config, const DesignFamily& family);

struct AdmissibleDesign {
  DesignRealisation design;
  OperatingCharacteristics oc;
};

struct AdmissibleSet {
  DesignFamily family;
  std::vector<AdmissibleDesign> designs;
};

/// Comparison keys for dominance: ESS rounded to one decimal place in
/// Rounded mode, full precision otherwise.
double dominance_key(double ess, DominanceMode mode);

/// Indices of the members not dominated on (ess0, ess1, n_max). Members tied
/// on all three keys are all kept.
std::vector<std::size_t> pareto_front(const std::vector<AdmissibleDesign>& designs, DominanceMode mode);

/// Every feasible realisation of one family (all threshold pairs for
/// stochastic families), reduced to its admissible members.
AdmissibleSet search_family(const SearchConfig& config, const DesignFamily& family);

/// search_family for every configured family, with the Simon-based N cap.
std::vector<AdmissibleSet> search_all(const SearchConfig& config);

/// Deterministic ordering used for ties after the criterion itself:
/// n_max, r, r1, n1, e1, theta_F, theta_E.
bool tie_break_less(const AdmissibleDesign& a, const AdmissibleDesign& b);

std::optional<AdmissibleDesign> select_optimal(const AdmissibleSet& set, Criterion criterion);

/// q0 E(N|p0) + q1 E(N|p1) + (1 - q0 - q1) N. Throws std::domain_error for
/// weights outside the simplex.
double loss(const OperatingCharacteristics& oc, double q0, double q1);

struct OmniEntry {
  double q0 = 0.0;
  double q1 = 0.0;
  DesignFamily family;
  std::size_t design_index = 0;  // into the family's admissible set
  double loss = 0.0;
};

struct OmniGrid {
  std::vector<DesignFamily> families;
  /// Global winner per grid point.
  std::vector<OmniEntry> winners;
  /// Best member of each family per grid point: per_family[f][g].
  std::vector<std::vector<OmniEntry>> per_family;
};

/// Weight grid q0 = i * step, q1 = j * step with i + j <= 1 / step. Empty
/// admissible sets take no part. Throws std::invalid_argument when every set
/// is empty.
OmniGrid omni_grid(const std::vector<AdmissibleSet>& sets, double step);

struct LossDifference {
  double q0 = 0.0;
  double q1 = 0.0;
  double difference = 0.0;  // loss(a) - loss(b); positive favours b
};

std::vector<LossDifference> loss_difference(const OmniGrid& grid, const DesignFamily& a, const DesignFamily& b);

}  // namespace curtail
