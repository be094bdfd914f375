#include "curtail/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "curtail/parallel.hpp"

namespace curtail::oracle {

namespace {

constexpr int kShards = 64;

Decision decision_of(PointStatus st) { return st == PointStatus::StopGo ? Decision::Go : Decision::NoGo; }

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

ReferenceRules::ReferenceRules(const DesignRealisation& design, double p1) : design_(design), p1_(p1) {
  design_.validate();
}

double ReferenceRules::compute(int s, int m) const {
  const auto key = std::make_pair(s, m);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second.first;
  PointStatus st = base_status(design_, {s, m});
  double value = 0.0;
  if (st == PointStatus::Continue) {
    const double d = p1_ * compute(s + 1, m + 1) + (1.0 - p1_) * compute(s, m + 1);
    if (design_.family.stochastic() && design_.family.monitors(m, design_.n)) {
      if (d < design_.theta_f) {
        st = PointStatus::StopNoGo;
      } else if (d > design_.theta_e) {
        st = PointStatus::StopGo;
      }
    }
    value = st == PointStatus::Continue ? d : (st == PointStatus::StopGo ? 1.0 : 0.0);
  } else {
    value = st == PointStatus::StopGo ? 1.0 : 0.0;
  }
  memo_[key] = {value, st};
  return value;
}

PointStatus ReferenceRules::status(int s, int m) const {
  compute(s, m);
  return memo_.at({s, m}).second;
}

double ReferenceRules::cp(int s, int m) const { return compute(s, m); }

BruteForceResult brute_force(const DesignRealisation& design, double p1, double p) {
  if (design.n > kBruteForceMaxN) throw std::domain_error("brute force is limited to N <= 20");
  const ReferenceRules rules(design, p1);
  const int n = design.n;
  BruteForceResult out;
  const std::uint64_t sequences = std::uint64_t{1} << n;
  for (std::uint64_t seq = 0; seq < sequences; ++seq) {
    int s = 0;
    int m = 0;
    PointStatus st = rules.status(0, 0);
    while (st == PointStatus::Continue) {
      s += static_cast<int>((seq >> m) & 1U);
      ++m;
      st = rules.status(s, m);
    }
    // One representative per truncated path: the sequence whose unseen
    // outcomes are all failures.
    if (m < 64 && (seq >> m) != 0) continue;
    const double prob = std::pow(p, s) * std::pow(1.0 - p, m - s);
    ++out.truncated_paths;
    out.covered_sequences += std::uint64_t{1} << (n - m);
    out.histogram[{m, s}] += prob;
    out.decisions[{m, s}] = decision_of(st);
    if (st == PointStatus::StopGo) out.go_probability += prob;
    out.expected_sample_size += prob * m;
  }
  return out;
}

MonteCarloResult monte_carlo(const DesignRealisation& design, double p1, double p, std::uint64_t n_sims,
                             std::uint64_t seed, int workers) {
  if (n_sims < 1) throw std::domain_error("n_sims must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("response rate must lie in [0, 1]");
  const ReferenceRules rules(design, p1);
  // Fill the memo before sharing across threads.
  (void)rules.cp(0, 0);
  for (int m = 0; m <= design.n; ++m) {
    for (int s = 0; s <= m; ++s) (void)rules.status(s, m);
  }

  struct Shard {
    std::uint64_t go = 0;
    std::uint64_t size_sum = 0;
    std::uint64_t size_sq = 0;
  };
  std::vector<Shard> shards(kShards);
  parallel_for(kShards, workers, [&](std::size_t k) {
    const std::uint64_t sims = n_sims / kShards + (k < n_sims % kShards ? 1 : 0);
    std::mt19937_64 rng(shard_seed(seed, k));
    std::bernoulli_distribution response(p);
    Shard& sh = shards[k];
    for (std::uint64_t i = 0; i < sims; ++i) {
      int s = 0;
      int m = 0;
      PointStatus st = rules.status(0, 0);
      while (st == PointStatus::Continue) {
        if (response(rng)) ++s;
        ++m;
        st = rules.status(s, m);
      }
      if (st == PointStatus::StopGo) ++sh.go;
      sh.size_sum += static_cast<std::uint64_t>(m);
      sh.size_sq += static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(m);
    }
  });

  Shard total;
  for (const Shard& sh : shards) {
    total.go += sh.go;
    total.size_sum += sh.size_sum;
    total.size_sq += sh.size_sq;
  }
  const double count = static_cast<double>(n_sims);
  MonteCarloResult out;
  out.n_sims = n_sims;
  out.seed = seed;
  out.go_rate = static_cast<double>(total.go) / count;
  out.go_se = std::sqrt(out.go_rate * (1.0 - out.go_rate) / count);
  out.mean_size = static_cast<double>(total.size_sum) / count;
  const double var = std::max(0.0, static_cast<double>(total.size_sq) / count - out.mean_size * out.mean_size);
  out.size_se = std::sqrt(var / count);
  return out;
}

bool OracleReport::agrees() const {
  if (method == Method::BruteForce) return discrepancy < 1e-10;
  return discrepancy_se <= 4.0;
}

OracleReport audit_brute_force(const DesignRealisation& design, const DesignParams& params) {
  const BruteForceResult h0 = brute_force(design, params.p1, params.p0);
  const BruteForceResult h1 = brute_force(design, params.p1, params.p1);
  OracleReport rep;
  rep.design = design;
  rep.method = Method::BruteForce;
  rep.oracle = {h0.go_probability, h1.go_probability, h0.expected_sample_size, h1.expected_sample_size, design.n};
  rep.exact = operating_characteristics(design, params);
  rep.discrepancy = std::max({std::abs(rep.oracle.alpha - rep.exact.alpha),
                              std::abs(rep.oracle.power - rep.exact.power),
                              std::abs(rep.oracle.ess0 - rep.exact.ess0), std::abs(rep.oracle.ess1 - rep.exact.ess1)});
  return rep;
}

OracleReport audit_monte_carlo(const DesignRealisation& design, const DesignParams& params, std::uint64_t n_sims,
                               std::uint64_t seed, int workers) {
  const MonteCarloResult h0 = monte_carlo(design, params.p1, params.p0, n_sims, seed, workers);
  const MonteCarloResult h1 = monte_carlo(design, params.p1, params.p1, n_sims, seed + 1, workers);
  OracleReport rep;
  rep.design = design;
  rep.method = Method::MonteCarlo;
  rep.n_sims = n_sims;
  rep.seed = seed;
  rep.oracle = {h0.go_rate, h1.go_rate, h0.mean_size, h1.mean_size, design.n};
  rep.exact = operating_characteristics(design, params);
  const std::array<std::pair<double, double>, 4> diffs{{
      {std::abs(rep.oracle.alpha - rep.exact.alpha), h0.go_se},
      {std::abs(rep.oracle.power - rep.exact.power), h1.go_se},
      {std::abs(rep.oracle.ess0 - rep.exact.ess0), h0.size_se},
      {std::abs(rep.oracle.ess1 - rep.exact.ess1), h1.size_se},
  }};
  for (const auto& [diff, se] : diffs) {
    rep.discrepancy = std::max(rep.discrepancy, diff);
    const double z = se > 0.0 ? diff / se : (diff > 1e-12 ? INFINITY : 0.0);
    rep.discrepancy_se = std::max(rep.discrepancy_se, z);
  }
  return rep;
}

}  // namespace curtail::oracle
