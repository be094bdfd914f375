#include "curtail/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include <boost/math/distributions/normal.hpp>

#include "curtail/parallel.hpp"
#include "curtail/wald.hpp"

namespace curtail {

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::H0Optimal: return "h0opt";
    case Criterion::H1Optimal: return "h1opt";
    case Criterion::H0Minimax: return "h0minimax";
    case Criterion::H1Minimax: return "h1minimax";
  }
  return "?";
}

Criterion parse_criterion(std::string_view text) {
  for (Criterion c : all_criteria()) {
    if (text == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown criterion '" + std::string(text) + "'");
}

const std::vector<Criterion>& all_criteria() {
  static const std::vector<Criterion> all{Criterion::H0Optimal, Criterion::H1Optimal, Criterion::H0Minimax,
                                          Criterion::H1Minimax};
  return all;
}

void SearchConfig::validate() const {
  params.validate();
  if (n_min < 1) throw std::domain_error("n_min must be positive");
  if (!(weight_grid_step > 0.0 && weight_grid_step <= 0.5)) {
    throw std::domain_error("weight grid step must lie in (0, 0.5]");
  }
  if (!(theta_e_min >= 0.0 && theta_e_min <= 1.0)) throw std::domain_error("theta_e_min must lie in [0, 1]");
  if (simon_cap_factor <= 0.0) throw std::domain_error("simon cap factor must be positive");
  if (theta_tail_skip < 0) throw std::domain_error("theta_tail_skip must be nonnegative");
}

int SearchConfig::n_max_for(const DesignFamily& family) const {
  const auto it = n_max_by_family.find(family.name());
  return it == n_max_by_family.end() ? n_max : it->second;
}

double ahern_point_boundary(int n, const DesignParams& params) {
  const boost::math::normal standard;
  const double z_alpha = boost::math::quantile(boost::math::complement(standard, params.alpha / 2.0));
  const double z_power = boost::math::quantile(boost::math::complement(standard, params.beta));
  return n * (params.p0 + z_alpha / (z_alpha + z_power) * (params.p1 - params.p0));
}

IntRange r_bounds(int n, const DesignParams& params, RBoundRule rule) {
  if (n < 1) throw std::domain_error("N must be positive");
  IntRange range{static_cast<int>(std::floor(n * params.p0)), static_cast<int>(std::ceil(n * params.p1))};
  range.hi = std::min(range.hi, n - 1);
  if (rule == RBoundRule::Wald) {
    const WaldBoundaries w = wald_boundaries(params);
    range.lo = std::max(range.lo, static_cast<int>(std::ceil(w.no_go(n))));
    range.hi = std::min(range.hi, static_cast<int>(std::floor(w.go(n))));
  }
  range.lo = std::max(range.lo, 0);
  return range;
}

namespace {

struct CandidateGroup {
  int n;
  int r;
};

std::vector<CandidateGroup> candidate_groups(const SearchConfig& config, const DesignFamily& family) {
  std::vector<CandidateGroup> groups;
  for (int n = config.n_min; n <= config.n_max_for(family); ++n) {
    // Block designs recruit whole blocks.
    if (family.kind == FamilyKind::BlockSC && n % family.block_size != 0) continue;
    const IntRange rs = r_bounds(n, config.params, config.r_rule);
    for (int r = rs.lo; r <= rs.hi; ++r) groups.push_back({n, r});
  }
  return groups;
}

template <class Fn>
void for_each_candidate(const DesignFamily& family, CandidateGroup g, Fn&& fn) {
  DesignRealisation d;
  d.family = family;
  d.r = g.r;
  d.n = g.n;
  if (!family.two_stage()) {
    fn(d);
    return;
  }
  for (int n1 = 1; n1 <= g.n - 1; ++n1) {
    for (int r1 = 0; r1 <= std::min(g.r, n1 - 1); ++r1) {
      d.n1 = n1;
      d.r1 = r1;
      if (family.kind == FamilyKind::SimonGo) {
        for (int e1 = r1 + 1; e1 <= n1; ++e1) {
          d.e1 = e1;
          fn(d);
        }
      } else {
        fn(d);
      }
    }
  }
}

bool theta_f_constrained(const SearchConfig& config, const DesignFamily& family) {
  // Blocks do not monitor at (r, N - 1), which is what bounds theta_F by p1.
  return config.theta_f_below_p1 && family.kind != FamilyKind::BlockSC;
}

// Scans the theta pairs of one candidate. For fixed theta_E, alpha and power
// are both nonincreasing in theta_F (and for fixed theta_F, in theta_E): a
// higher threshold only lowers conditional power pointwise, which shrinks
// the set of sequences ending in a go decision. The feasible theta_F for
// each theta_E are therefore a contiguous index range found by bisection.
void scan_thresholds(const CharacteristicsKernel& kernel, const SearchConfig& config, bool constrain_f,
                     std::vector<AdmissibleDesign>& out) {
  const DesignParams& params = config.params;
  const ThetaSet theta = kernel.base_theta_set(config.theta_tail_skip);
  const auto& v = theta.values;
  const int size = static_cast<int>(v.size());
  const int f_end = constrain_f ? static_cast<int>(std::lower_bound(v.begin(), v.end(), params.p1) - v.begin()) : size;
  const int e_begin = std::max<int>(
      1, static_cast<int>(std::lower_bound(v.begin(), v.end(), config.theta_e_min) - v.begin()));
  if (f_end <= 0 || e_begin >= size) return;

  const double power_target = 1.0 - params.beta;
  auto eval = [&](int i, int j) { return kernel.evaluate(v[i], v[j]); };
  auto power_ok = [&](const OperatingCharacteristics& oc) { return oc.power >= power_target; };
  auto alpha_ok = [&](const OperatingCharacteristics& oc) { return oc.alpha <= params.alpha; };

  if (!power_ok(eval(0, e_begin))) return;
  const int i_last = std::min(f_end, size - 1) - 1;
  if (!alpha_ok(eval(i_last, size - 1))) return;

  DesignRealisation design = kernel.boundaries();
  int hi_prev = size;
  int lo_prev = size;
  for (int j = e_begin; j < size; ++j) {
    const int i_top = std::min({f_end, j, hi_prev + 1}) - 1;
    if (i_top < 0) break;
    if (!power_ok(eval(0, j))) break;
    // Largest power-feasible index.
    int lo = 0;
    int hi = i_top;
    while (lo < hi) {
      const int mid = lo + (hi - lo + 1) / 2;
      if (power_ok(eval(mid, j))) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    const int hi_j = lo;
    hi_prev = hi_j;
    if (!alpha_ok(eval(hi_j, j))) continue;
    // Smallest alpha-feasible index.
    lo = 0;
    hi = std::min(hi_j, lo_prev);
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (alpha_ok(eval(mid, j))) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const int lo_j = lo;
    lo_prev = lo_j;
    for (int i = lo_j; i <= hi_j; ++i) {
      const OperatingCharacteristics oc = eval(i, j);
      if (!oc.feasible(params)) continue;
      design.theta_f = v[i];
      design.theta_e = v[j];
      out.push_back({design, oc});
    }
  }
}

void keep_front(std::vector<AdmissibleDesign>& designs, DominanceMode mode) {
  if (designs.size() < 2) return;
  const auto idx = pareto_front(designs, mode);
  std::vector<AdmissibleDesign> kept;
  kept.reserve(idx.size());
  for (auto i : idx) kept.push_back(std::move(designs[i]));
  designs = std::move(kept);
}

auto order_key(const AdmissibleDesign& d) {
  return std::make_tuple(d.design.n, d.design.r, d.design.r1.value_or(-1), d.design.n1.value_or(-1),
                         d.design.e1.value_or(-1), d.design.theta_f, d.design.theta_e);
}

}  // namespace

std::vector<DesignRealisation> enumerate_candidates(const SearchConfig& config, const DesignFamily& family) {
  std::vector<DesignRealisation> out;
  for (const auto& g : candidate_groups(config, family)) {
    for_each_candidate(family, g, [&](const DesignRealisation& d) { out.push_back(d); });
  }
  return out;
}

double dominance_key(double ess, DominanceMode mode) {
  return mode == DominanceMode::Rounded ? std::round(ess * 10.0) : ess;
}

std::vector<std::size_t> pareto_front(const std::vector<AdmissibleDesign>& designs, DominanceMode mode) {
  struct Key {
    int n;
    double a;
    double b;
    std::size_t index;
  };
  std::vector<Key> keys;
  keys.reserve(designs.size());
  for (std::size_t i = 0; i < designs.size(); ++i) {
    keys.push_back({designs[i].design.n, dominance_key(designs[i].oc.ess0, mode),
                    dominance_key(designs[i].oc.ess1, mode), i});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
    return std::tie(x.n, x.a, x.b, x.index) < std::tie(y.n, y.a, y.b, y.index);
  });

  // Staircase of survivors with strictly smaller N: a -> min b, b strictly
  // decreasing in a.
  std::map<double, double> stairs;
  auto covered = [&](double a, double b) {
    auto it = stairs.upper_bound(a);
    if (it == stairs.begin()) return false;
    --it;
    return it->second <= b;
  };
  auto insert = [&](double a, double b) {
    if (covered(a, b)) return;
    auto [it, inserted] = stairs.insert_or_assign(a, b);
    auto next = std::next(it);
    while (next != stairs.end() && next->second >= b) next = stairs.erase(next);
  };

  std::vector<std::size_t> front;
  std::size_t g = 0;
  while (g < keys.size()) {
    std::size_t end = g;
    while (end < keys.size() && keys[end].n == keys[g].n) ++end;
    std::vector<const Key*> survivors;
    double best_b_smaller_a = std::numeric_limits<double>::infinity();
    std::size_t k = g;
    while (k < end) {
      std::size_t same_a_end = k;
      while (same_a_end < end && keys[same_a_end].a == keys[k].a) ++same_a_end;
      const double group_min_b = keys[k].b;
      for (std::size_t t = k; t < same_a_end; ++t) {
        const Key& key = keys[t];
        if (key.b > group_min_b) continue;             // same a, larger b
        if (best_b_smaller_a <= key.b) continue;        // smaller a, no larger b
        if (covered(key.a, key.b)) continue;            // smaller N
        survivors.push_back(&key);
      }
      best_b_smaller_a = std::min(best_b_smaller_a, group_min_b);
      k = same_a_end;
    }
    for (const Key* key : survivors) {
      front.push_back(key->index);
      insert(key->a, key->b);
    }
    g = end;
  }
  std::sort(front.begin(), front.end());
  return front;
}

AdmissibleSet search_family(const SearchConfig& config, const DesignFamily& family) {
  config.validate();
  const auto groups = candidate_groups(config, family);
  std::vector<std::vector<AdmissibleDesign>> results(groups.size());
  const bool constrain_f = theta_f_constrained(config, family);

  parallel_for(groups.size(), config.workers, [&](std::size_t gi) {
    auto& out = results[gi];
    for_each_candidate(family, groups[gi], [&](const DesignRealisation& d) {
      const CharacteristicsKernel kernel(d, config.params);
      std::vector<AdmissibleDesign> found;
      if (family.stochastic()) {
        scan_thresholds(kernel, config, constrain_f, found);
      } else {
        const OperatingCharacteristics oc = kernel.evaluate(0.0, 1.0);
        if (oc.feasible(config.params)) found.push_back({d, oc});
      }
      keep_front(found, config.dominance);
      out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
    });
    keep_front(out, config.dominance);
  });

  AdmissibleSet set{family, {}};
  for (auto& r : results) {
    set.designs.insert(set.designs.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  }
  keep_front(set.designs, config.dominance);
  std::sort(set.designs.begin(), set.designs.end(),
            [](const AdmissibleDesign& a, const AdmissibleDesign& b) { return order_key(a) < order_key(b); });
  return set;
}

std::vector<AdmissibleSet> search_all(const SearchConfig& config) {
  config.validate();
  std::vector<AdmissibleSet> sets;
  std::optional<int> simon_cap;
  auto needs_cap = [](const DesignFamily& f) {
    return f.kind == FamilyKind::Simon || f.kind == FamilyKind::SimonGo;
  };
  for (const auto& family : config.families) {
    if (!needs_cap(family)) continue;
    AdmissibleSet simon = search_family(config, DesignFamily::simon());
    const auto best = select_optimal(simon, Criterion::H0Optimal);
    if (best) simon_cap = static_cast<int>(std::floor(config.simon_cap_factor * best->design.n + 1e-9));
    break;
  }
  for (const auto& family : config.families) {
    if (needs_cap(family) && simon_cap) {
      SearchConfig capped = config;
      capped.n_max_by_family[family.name()] = std::min(config.n_max_for(family), *simon_cap);
      sets.push_back(search_family(capped, family));
    } else {
      sets.push_back(search_family(config, family));
    }
  }
  return sets;
}

bool tie_break_less(const AdmissibleDesign& a, const AdmissibleDesign& b) { return order_key(a) < order_key(b); }

std::optional<AdmissibleDesign> select_optimal(const AdmissibleSet& set, Criterion criterion) {
  if (set.designs.empty()) return std::nullopt;
  const bool minimax = criterion == Criterion::H0Minimax || criterion == Criterion::H1Minimax;
  const bool under_h0 = criterion == Criterion::H0Optimal || criterion == Criterion::H0Minimax;
  int n_floor = set.designs.front().design.n;
  for (const auto& d : set.designs) n_floor = std::min(n_floor, d.design.n);

  const AdmissibleDesign* best = nullptr;
  for (const auto& d : set.designs) {
    if (minimax && d.design.n != n_floor) continue;
    if (best == nullptr) {
      best = &d;
      continue;
    }
    const double x = under_h0 ? d.oc.ess0 : d.oc.ess1;
    const double y = under_h0 ? best->oc.ess0 : best->oc.ess1;
    if (x < y || (x == y && tie_break_less(d, *best))) best = &d;
  }
  return *best;
}

double loss(const OperatingCharacteristics& oc, double q0, double q1) {
  constexpr double slack = 1e-9;
  if (q0 < -slack || q1 < -slack || q0 + q1 > 1.0 + slack) {
    throw std::domain_error("loss weights must satisfy q0, q1 >= 0 and q0 + q1 <= 1");
  }
  return q0 * oc.ess0 + q1 * oc.ess1 + (1.0 - q0 - q1) * oc.n_max;
}

namespace {

// Exact loss ties go to the smaller ESS under p0, then under p1.
bool omni_less(double la, const OperatingCharacteristics& a, double lb, const OperatingCharacteristics& b) {
  return std::tie(la, a.ess0, a.ess1) < std::tie(lb, b.ess0, b.ess1);
}

}  // namespace

OmniGrid omni_grid(const std::vector<AdmissibleSet>& sets, double step) {
  if (!(step > 0.0 && step <= 0.5)) throw std::domain_error("weight grid step must lie in (0, 0.5]");
  OmniGrid grid;
  std::vector<const AdmissibleSet*> used;
  for (const auto& s : sets) {
    if (s.designs.empty()) continue;
    used.push_back(&s);
    grid.families.push_back(s.family);
  }
  if (used.empty()) throw std::invalid_argument("omni grid needs at least one nonempty admissible set");
  const int steps = static_cast<int>(std::lround(1.0 / step));
  grid.per_family.resize(used.size());
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      const double q0 = i * step;
      const double q1 = j * step;
      OmniEntry winner;
      OperatingCharacteristics winner_oc;
      bool have_winner = false;
      for (std::size_t f = 0; f < used.size(); ++f) {
        const auto& designs = used[f]->designs;
        std::size_t best = 0;
        double best_loss = loss(designs[0].oc, q0, q1);
        for (std::size_t k = 1; k < designs.size(); ++k) {
          const double l = loss(designs[k].oc, q0, q1);
          if (omni_less(l, designs[k].oc, best_loss, designs[best].oc)) {
            best = k;
            best_loss = l;
          }
        }
        OmniEntry entry{q0, q1, used[f]->family, best, best_loss};
        grid.per_family[f].push_back(entry);
        if (!have_winner ||
            omni_less(best_loss, designs[best].oc, winner.loss, winner_oc)) {
          winner = entry;
          winner_oc = designs[best].oc;
          have_winner = true;
        }
      }
      grid.winners.push_back(winner);
    }
  }
  return grid;
}

std::vector<LossDifference> loss_difference(const OmniGrid& grid, const DesignFamily& a, const DesignFamily& b) {
  auto find = [&](const DesignFamily& f) -> const std::vector<OmniEntry>& {
    for (std::size_t i = 0; i < grid.families.size(); ++i) {
      if (grid.families[i] == f) return grid.per_family[i];
    }
    throw std::invalid_argument("family '" + f.name() + "' is not part of the omni grid");
  };
  const auto& la = find(a);
  const auto& lb = find(b);
  std::vector<LossDifference> out;
  out.reserve(la.size());
  for (std::size_t g = 0; g < la.size(); ++g) out.push_back({la[g].q0, la[g].q1, la[g].loss - lb[g].loss});
  return out;
}

}  // namespace curtail
