#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"

#include "commands.hpp"
#include "curtail/parallel.hpp"

namespace {

using curtail::cli::CommandResult;
using curtail::cli::Options;

int resolve_workers(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("CURTAIL_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid CURTAIL_WORKERS='" << env << "'\n";
  }
  return curtail::default_workers();
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--scenario", o.scenario_path, "YAML scenario file");
  cmd->add_option("--alpha", o.alpha, "Nominal type I error");
  cmd->add_option("--beta", o.beta, "Nominal type II error");
  cmd->add_option("--p0", o.p0, "Uninteresting response rate");
  cmd->add_option("--p1", o.p1, "Target response rate");
  cmd->add_option("--workers", o.workers, "Worker threads (default: CURTAIL_WORKERS or hardware threads)");
}

void add_search(CLI::App* cmd, Options& o) {
  cmd->add_option("--families", o.families, "Comma-separated families: simon,simongo,nsc,sc,mstage,single,blockB");
  cmd->add_option("--criterion", o.criterion, "h0opt|h1opt|h0minimax|h1minimax|all");
  cmd->add_option("--theta-e-min", o.theta_e_min, "Lower bound on theta_E");
  cmd->add_option("--dominance", o.dominance, "rounded|exact");
}

void add_design(CLI::App* cmd, Options& o) {
  cmd->add_option("--family", o.family, "Design family");
  cmd->add_option("--r", o.r, "Final boundary: go iff responses exceed r");
  cmd->add_option("--n", o.n, "Maximum sample size");
  cmd->add_option("--r1", o.r1, "Interim no-go boundary");
  cmd->add_option("--n1", o.n1, "Interim sample size");
  cmd->add_option("--e1", o.e1, "Interim go boundary");
  cmd->add_option("--theta-f", o.theta_f, "Futility threshold");
  cmd->add_option("--theta-e", o.theta_e, "Efficacy threshold");
}

void emit(const CommandResult& res, const std::string& out_dir) {
  if (out_dir.empty()) {
    for (const auto& f : res.files) std::cout << f.content;
    return;
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& f : res.files) {
    const auto path = std::filesystem::path(out_dir) / f.name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file << f.content;
    std::cerr << "wrote " << path.string() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact search and evaluation of curtailed single-arm binary-outcome trial designs"};
  app.set_version_flag("--version", std::string(curtail::cli::kVersion));
  app.require_subcommand(1);
  Options o;
  o.workers = 0;
  std::string out_dir;
  std::function<CommandResult(const Options&)> action;

  auto* search = app.add_subcommand("search", "Admissible and optimal designs per family and criterion");
  add_common(search, o);
  add_search(search, o);

  auto* block = app.add_subcommand("block", "Search block-monitored stochastically curtailed designs");
  add_common(block, o);
  add_search(block, o);
  block->add_option("--size", o.size, "Block size B");

  auto* evaluate = app.add_subcommand("evaluate", "Exact operating characteristics of one design");
  add_common(evaluate, o);
  add_design(evaluate, o);

  auto* cpm = app.add_subcommand("cp-matrix", "Conditional power at every lattice point");
  add_common(cpm, o);
  add_design(cpm, o);
  cpm->add_flag("--base", o.base, "Ignore stochastic thresholds");

  auto* omni = app.add_subcommand("omni", "Loss-function weight grid across families");
  add_common(omni, o);
  add_search(omni, o);
  omni->add_option("--grid-step", o.grid_step, "Weight grid step");

  auto* wald = app.add_subcommand("wald", "Sequential probability ratio test benchmark");
  add_common(wald, o);

  auto* est = app.add_subcommand("estimators", "Bias and RMSE of point estimators");
  add_common(est, o);
  add_search(est, o);
  add_design(est, o);
  est->add_option("--mue-ties", o.mue_ties, "midp|half|inclusive");
  est->add_option("--p-step", o.p_step, "Response-rate grid step");

  auto* audit = app.add_subcommand("audit", "Check exact results against enumeration or simulation");
  add_common(audit, o);
  add_design(audit, o);
  audit->add_option("--method", o.method, "brute|mc");
  audit->add_option("--sims", o.sims, "Monte-Carlo replicates");
  audit->add_option("--seed", o.seed, "Monte-Carlo seed");

  for (auto* cmd : {search, block, evaluate, cpm, omni, wald, est, audit}) {
    cmd->add_option("--out", out_dir, "Output directory (default: stdout)");
  }
  search->callback([&] { action = curtail::cli::run_search; });
  block->callback([&] { action = curtail::cli::run_block; });
  evaluate->callback([&] { action = curtail::cli::run_evaluate; });
  cpm->callback([&] { action = curtail::cli::run_cp_matrix; });
  omni->callback([&] { action = curtail::cli::run_omni; });
  wald->callback([&] { action = curtail::cli::run_wald; });
  est->callback([&] { action = curtail::cli::run_estimators; });
  audit->callback([&] { action = curtail::cli::run_audit; });

  CLI11_PARSE(app, argc, argv);
  o.workers = resolve_workers(o.workers);
  try {
    const CommandResult res = action(o);
    for (const auto& f : res.files) {
      if (f.content.find("# warning:") != std::string::npos) std::cerr << "warning: see " << f.name << "\n";
    }
    emit(res, out_dir);
    return res.exit_code;
  } catch (const curtail::cli::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const curtail::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
