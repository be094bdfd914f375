#include "commands.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "curtail/cp.hpp"
#include "curtail/estimation.hpp"
#include "curtail/exact.hpp"
#include "curtail/oracle.hpp"
#include "curtail/search.hpp"
#include "curtail/wald.hpp"

namespace curtail::cli {

namespace {

using nlohmann::ordered_json;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

std::vector<DesignFamily> parse_families(const std::string& list) {
  std::vector<DesignFamily> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(DesignFamily::parse(item));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("--families needs at least one family");
  return out;
}

std::vector<Criterion> parse_criteria(const std::string& text) {
  if (text == "all") return all_criteria();
  try {
    return {parse_criterion(text)};
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ordered_json design_json(const DesignRealisation& d) {
  ordered_json j;
  j["family"] = d.family.name();
  if (d.r1) j["r1"] = *d.r1;
  if (d.e1) j["e1"] = *d.e1;
  if (d.n1) j["n1"] = *d.n1;
  j["r"] = d.r;
  j["n"] = d.n;
  if (d.family.stochastic()) {
    j["theta_f"] = d.theta_f;
    j["theta_e"] = d.theta_e;
  }
  return j;
}

ordered_json oc_json(const OperatingCharacteristics& oc) {
  return {{"alpha", oc.alpha}, {"power", oc.power}, {"ess0", oc.ess0}, {"ess1", oc.ess1}, {"n_max", oc.n_max}};
}

std::string dump_json(const std::string& command, const Scenario& sc, ordered_json body) {
  ordered_json out;
  out["meta"] = metadata_line(command, sc).substr(2);
  for (auto& [k, v] : body.items()) out[k] = v;
  return out.dump(2) + "\n";
}

const AdmissibleSet* find_set(const std::vector<AdmissibleSet>& sets, const DesignFamily& f) {
  for (const auto& s : sets) {
    if (s.family == f) return &s;
  }
  return nullptr;
}

constexpr const char* kTableHeader =
    "criterion,family,r1,e1,n1,r,n2,n,ess0,pct_s_p0,ess1,pct_s_p1,theta_f,theta_e,alpha,power\n";

std::string pct(double value, double ref) {
  if (ref <= 0.0) return "";
  return fixed(value / ref, 4);
}

std::string design_row(Criterion c, const AdmissibleDesign& a, const std::optional<AdmissibleDesign>& ref) {
  const DesignRealisation& d = a.design;
  const double ref0 = ref ? ref->oc.ess0 : 0.0;
  const double ref1 = ref ? ref->oc.ess1 : 0.0;
  std::ostringstream row;
  row << to_string(c) << "," << d.family.name() << "," << opt_int(d.r1) << "," << opt_int(d.e1) << ","
      << opt_int(d.n1) << "," << d.r << "," << (d.n1 ? std::to_string(d.n - *d.n1) : "") << "," << d.n << ","
      << fixed(a.oc.ess0, 4) << "," << pct(a.oc.ess0, ref0) << "," << fixed(a.oc.ess1, 4) << ","
      << pct(a.oc.ess1, ref1) << ",";
  if (d.family.stochastic()) row << fixed(d.theta_f, 9) << "," << fixed(d.theta_e, 9);
  else row << ",";
  row << "," << fixed(a.oc.alpha, 6) << "," << fixed(a.oc.power, 6) << "\n";
  return row.str();
}

std::string design_table(const std::string& command, const Scenario& sc, const std::vector<AdmissibleSet>& sets,
                         const AdmissibleSet& reference, const std::vector<Criterion>& criteria, bool with_wald) {
  std::ostringstream out;
  out << metadata_line(command, sc) << "\n" << kTableHeader;
  for (const auto& set : sets) {
    if (set.designs.empty()) out << "# warning: no feasible " << set.family.name() << " design\n";
  }
  const WaldExpectedSize wald = wald_ess(sc.config.params);
  for (Criterion c : criteria) {
    const auto ref = select_optimal(reference, c);
    for (const auto& set : sets) {
      if (const auto best = select_optimal(set, c)) out << design_row(c, *best, ref);
    }
    if (with_wald && (c == Criterion::H0Optimal || c == Criterion::H1Optimal)) {
      out << to_string(c) << ",wald,,,,,,," << fixed(wald.ess0, 4) << ","
          << pct(wald.ess0, ref ? ref->oc.ess0 : 0.0) << "," << fixed(wald.ess1, 4)
          << "," << pct(wald.ess1, ref ? ref->oc.ess1 : 0.0) << ",,,,\n";
    }
  }
  return out.str();
}

std::string admissible_table(const std::string& command, const Scenario& sc, const std::vector<AdmissibleSet>& sets) {
  std::ostringstream out;
  out << metadata_line(command, sc) << "\n"
      << "family,r1,e1,n1,r,n2,n,ess0,ess1,theta_f,theta_e,alpha,power\n";
  for (const auto& set : sets) {
    for (const auto& a : set.designs) {
      const DesignRealisation& d = a.design;
      out << d.family.name() << "," << opt_int(d.r1) << "," << opt_int(d.e1) << "," << opt_int(d.n1) << "," << d.r
          << "," << (d.n1 ? std::to_string(d.n - *d.n1) : "") << "," << d.n << "," << fixed(a.oc.ess0, 6) << ","
          << fixed(a.oc.ess1, 6) << ",";
      if (d.family.stochastic()) out << fixed(d.theta_f, 9) << "," << fixed(d.theta_e, 9);
      else out << ",";
      out << "," << fixed(a.oc.alpha, 6) << "," << fixed(a.oc.power, 6) << "\n";
    }
  }
  return out.str();
}

AdmissibleSet reference_set(const SearchConfig& config, const std::vector<AdmissibleSet>& sets) {
  if (const AdmissibleSet* s = find_set(sets, config.reference_family)) return *s;
  return search_family(config, config.reference_family);
}

CpMatrix governing_matrix(const DesignRealisation& d, double p1) {
  return d.family.stochastic() ? cp_matrix_sc(d, p1) : cp_matrix_nsc(d, p1);
}

MueTies parse_ties(const std::string& text) {
  if (text == "midp") return MueTies::MidP;
  if (text == "half") return MueTies::HalfOthers;
  if (text == "inclusive") return MueTies::Inclusive;
  throw UsageError("--mue-ties must be midp, half or inclusive");
}

}  // namespace

Scenario effective_scenario(const Options& opts) {
  Scenario sc = opts.scenario_path ? load_scenario(*opts.scenario_path) : Scenario{};
  if (!opts.scenario_path) {
    sc.config.families = {DesignFamily::simon(), DesignFamily::simon_go(), DesignFamily::nsc(), DesignFamily::sc(),
                          DesignFamily::m_stage()};
  }
  SearchConfig& c = sc.config;
  if (opts.alpha) c.params.alpha = *opts.alpha;
  if (opts.beta) c.params.beta = *opts.beta;
  if (opts.p0) c.params.p0 = *opts.p0;
  if (opts.p1) c.params.p1 = *opts.p1;
  if (opts.families) c.families = parse_families(*opts.families);
  if (opts.theta_e_min) c.theta_e_min = *opts.theta_e_min;
  if (opts.grid_step) c.weight_grid_step = *opts.grid_step;
  if (opts.dominance) {
    if (*opts.dominance == "exact") c.dominance = DominanceMode::Exact;
    else if (*opts.dominance == "rounded") c.dominance = DominanceMode::Rounded;
    else throw UsageError("--dominance must be rounded or exact");
  }
  try {
    c.params.validate();
    c.validate();
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  c.workers = opts.workers;
  return sc;
}

std::string metadata_line(const std::string& command, const Scenario& scenario) {
  return std::string("# curtail ") + kVersion + " command=" + command + " scenario=" + scenario_hash(scenario);
}

DesignRealisation design_from_options(const Options& opts) {
  if (!opts.family) throw UsageError("--family is required");
  if (!opts.r || !opts.n) throw UsageError("--r and --n are required");
  DesignRealisation d;
  try {
    d.family = DesignFamily::parse(*opts.family);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  d.r = *opts.r;
  d.n = *opts.n;
  d.r1 = opts.r1;
  d.n1 = opts.n1;
  d.e1 = opts.e1;
  if (opts.theta_f) d.theta_f = *opts.theta_f;
  if (opts.theta_e) d.theta_e = *opts.theta_e;
  try {
    d.validate();
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  return d;
}

CommandResult run_search(const Options& opts) {
  const Scenario sc = effective_scenario(opts);
  const auto criteria = parse_criteria(opts.criterion);
  const auto sets = search_all(sc.config);
  const AdmissibleSet ref = reference_set(sc.config, sets);
  CommandResult res;
  res.files.push_back({"search.csv", design_table("search", sc, sets, ref, criteria, true)});
  res.files.push_back({"admissible.csv", admissible_table("search", sc, sets)});
  return res;
}

CommandResult run_block(const Options& opts) {
  Scenario sc = effective_scenario(opts);
  std::vector<int> sizes = opts.size ? std::vector<int>{*opts.size} : sc.block_sizes;
  if (sizes.empty()) throw UsageError("block needs --size or block_sizes in the scenario");
  std::vector<DesignFamily> families;
  for (int b : sizes) {
    if (b < 1) throw UsageError("--size must be positive");
    families.push_back(DesignFamily::block(b));
  }
  sc.config.families = families;
  sc.block_sizes = sizes;
  const auto criteria = parse_criteria(opts.criterion);
  const auto sets = search_all(sc.config);
  const AdmissibleSet ref = reference_set(sc.config, sets);
  CommandResult res;
  res.files.push_back({"block.csv", design_table("block", sc, sets, ref, criteria, false)});
  res.files.push_back({"block_admissible.csv", admissible_table("block", sc, sets)});
  return res;
}

CommandResult run_evaluate(const Options& opts) {
  const Scenario sc = effective_scenario(opts);
  const DesignRealisation d = design_from_options(opts);
  const OperatingCharacteristics oc = operating_characteristics(d, sc.config.params);
  ordered_json body;
  body["design"] = design_json(d);
  body["characteristics"] = oc_json(oc);
  body["feasible"] = oc.feasible(sc.config.params);
  CommandResult res;
  res.files.push_back({"evaluate.json", dump_json("evaluate", sc, body)});
  return res;
}

CommandResult run_cp_matrix(const Options& opts) {
  const Scenario sc = effective_scenario(opts);
  const DesignRealisation d = design_from_options(opts);
  const double p1 = sc.config.params.p1;
  const CpMatrix cpm = opts.base ? cp_matrix_nsc(d, p1) : governing_matrix(d, p1);
  std::ostringstream out;
  out << metadata_line("cp-matrix", sc) << "\n" << "s,m,cp,status,reachable\n";
  for (int m = 0; m <= d.n; ++m) {
    for (int s = 0; s <= m; ++s) {
      out << s << "," << m << "," << fixed(cpm.cp(s, m), 12) << "," << to_string(cpm.status(s, m)) << ","
          << (cpm.reachable(s, m) ? 1 : 0) << "\n";
    }
  }
  CommandResult res;
  res.files.push_back({"cp_matrix.csv", out.str()});
  return res;
}

CommandResult run_omni(const Options& opts) {
  const Scenario sc = effective_scenario(opts);
  const auto sets = search_all(sc.config);
  CommandResult res;
  std::ostringstream warn;
  for (const auto& set : sets) {
    if (set.designs.empty()) warn << "# warning: no feasible " << set.family.name() << " design\n";
  }
  bool any = false;
  for (const auto& set : sets) any = any || !set.designs.empty();
  if (!any) {
    res.files.push_back({"omni.csv", metadata_line("omni", sc) + "\n" + "q0,q1,family,loss\n" + warn.str()});
    return res;
  }
  const OmniGrid grid = omni_grid(sets, sc.config.weight_grid_step);
  std::ostringstream winners;
  winners << metadata_line("omni", sc) << "\n" << "q0,q1,family,loss\n" << warn.str();
  for (const auto& w : grid.winners) {
    winners << fixed(w.q0, 4) << "," << fixed(w.q1, 4) << "," << w.family.name() << "," << fixed(w.loss, 6) << "\n";
  }
  res.files.push_back({"omni.csv", winners.str()});

  std::ostringstream per;
  per << metadata_line("omni", sc) << "\n" << "q0,q1,family,loss\n";
  for (const auto& fam : grid.per_family) {
    for (const auto& e : fam) {
      per << fixed(e.q0, 4) << "," << fixed(e.q1, 4) << "," << e.family.name() << "," << fixed(e.loss, 6) << "\n";
    }
  }
  res.files.push_back({"omni_by_family.csv", per.str()});

  for (std::size_t a = 0; a < grid.families.size(); ++a) {
    for (std::size_t b = a + 1; b < grid.families.size(); ++b) {
      const auto& fa = grid.families[a];
      const auto& fb = grid.families[b];
      std::ostringstream diff;
      diff << metadata_line("omni", sc) << "\n" << "q0,q1,difference\n";
      for (const auto& d : loss_difference(grid, fa, fb)) {
        diff << fixed(d.q0, 4) << "," << fixed(d.q1, 4) << "," << fixed(d.difference, 6) << "\n";
      }
      res.files.push_back({"loss_diff_" + fa.name() + "_" + fb.name() + ".csv", diff.str()});
    }
  }
  return res;
}

CommandResult run_wald(const Options& opts) {
  const Scenario sc = effective_scenario(opts);
  const WaldBoundaries b = wald_boundaries(sc.config.params);
  const WaldExpectedSize e = wald_ess(sc.config.params);
  ordered_json body;
  body["params"] = {{"alpha", b.params.alpha}, {"beta", b.params.beta}, {"p0", b.params.p0}, {"p1", b.params.p1}};
  body["boundaries"] = {{"d", b.d},
                        {"intercept_no_go", b.intercept_no_go},
                        {"intercept_go", b.intercept_go},
                        {"slope", b.slope}};
  body["ess0"] = e.ess0;
  body["ess1"] = e.ess1;
  CommandResult res;
  res.files.push_back({"wald.json", dump_json("wald", sc, body)});
  return res;
}

CommandResult run_estimators(const Options& opts) {
  const Scenario sc = effective_scenario(opts);
  const MueTies ties = parse_ties(opts.mue_ties);
  std::vector<DesignRealisation> designs;
  if (opts.r) {
    designs.push_back(design_from_options(opts));
  } else {
    const auto criteria = parse_criteria(opts.criterion == "all" ? "h0opt" : opts.criterion);
    for (const auto& set : search_all(sc.config)) {
      if (const auto best = select_optimal(set, criteria.front())) designs.push_back(best->design);
    }
  }
  CommandResult res;
  std::ostringstream summary;
  summary << metadata_line("estimators", sc) << "\n" << "family,design,estimator,max_abs_bias,max_rmse\n";
  if (designs.empty()) summary << "# warning: no feasible design\n";
  for (const auto& d : designs) {
    const EstimateTable table(governing_matrix(d, sc.config.params.p1), ties);
    const AccuracyCurves curves = accuracy_curves(table, opts.p_step);
    std::ostringstream cv;
    cv << metadata_line("estimators", sc) << "\n" << "p,estimator,bias,rmse\n";
    for (EstimatorKind k : kAllEstimators) {
      const AccuracyCurve& c = curves.curve(k);
      for (std::size_t i = 0; i < curves.p_grid.size(); ++i) {
        cv << fixed(curves.p_grid[i], 4) << "," << to_string(k) << "," << fixed(c.bias[i], 8) << ","
           << fixed(c.rmse[i], 8) << "\n";
      }
      summary << d.family.name() << ",\"" << d.describe() << "\"," << to_string(k) << ","
              << fixed(c.max_abs_bias, 6) << "," << fixed(c.max_rmse, 6) << "\n";
    }
    res.files.push_back({"estimator_curves_" + d.family.name() + ".csv", cv.str()});

    std::ostringstream est;
    est << metadata_line("estimators", sc) << "\n" << "s,m,decision,paths";
    for (EstimatorKind k : kAllEstimators) est << "," << to_string(k);
    est << ",flagged\n";
    for (const auto& t : table.terminals()) {
      est << t.point.s << "," << t.point.m << "," << (t.decision == Decision::Go ? "go" : "nogo") << ","
          << fixed(t.path_count, 0);
      bool flagged = false;
      for (EstimatorKind k : kAllEstimators) {
        est << "," << fixed(t.get(k), 8);
        flagged = flagged || t.flagged[static_cast<std::size_t>(k)];
      }
      est << "," << (flagged ? 1 : 0) << "\n";
    }
    res.files.push_back({"estimates_" + d.family.name() + ".csv", est.str()});
  }
  res.files.insert(res.files.begin(), {"estimator_summary.csv", summary.str()});
  return res;
}

CommandResult run_audit(const Options& opts) {
  const Scenario sc = effective_scenario(opts);
  const DesignRealisation d = design_from_options(opts);
  oracle::OracleReport rep;
  if (opts.method == "brute") {
    if (d.n > oracle::kBruteForceMaxN) throw UsageError("brute-force audit is limited to N <= 20; use --method mc");
    rep = oracle::audit_brute_force(d, sc.config.params);
  } else if (opts.method == "mc") {
    if (opts.sims < 1) throw UsageError("--sims must be at least 1");
    rep = oracle::audit_monte_carlo(d, sc.config.params, opts.sims, opts.seed, opts.workers);
  } else {
    throw UsageError("--method must be brute or mc");
  }
  ordered_json body;
  body["design"] = design_json(d);
  body["method"] = opts.method == "brute" ? "brute_force" : "monte_carlo";
  if (opts.method == "mc") {
    body["n_sims"] = rep.n_sims;
    body["seed"] = rep.seed;
  }
  body["oracle"] = oc_json(rep.oracle);
  body["exact"] = oc_json(rep.exact);
  body["discrepancy"] = rep.discrepancy;
  body["discrepancy_se"] = rep.discrepancy_se;
  body["agrees"] = rep.agrees();
  CommandResult res;
  res.files.push_back({"audit.json", dump_json("audit", sc, body)});
  res.exit_code = rep.agrees() ? 0 : 1;
  return res;
}

}  // namespace curtail::cli
