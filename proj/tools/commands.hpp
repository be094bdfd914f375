#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "curtail/design.hpp"
#include "scenario.hpp"

namespace curtail::cli {

/// Bad flags or inconsistent designs; the CLI exits with status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<std::string> scenario_path;
  std::optional<std::string> families;
  std::string criterion = "all";
  std::optional<double> theta_e_min;
  std::optional<double> grid_step;
  std::optional<std::string> dominance;
  std::optional<int> size;
  int workers = 1;

  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> p0;
  std::optional<double> p1;

  std::optional<std::string> family;
  std::optional<int> r;
  std::optional<int> n;
  std::optional<int> r1;
  std::optional<int> n1;
  std::optional<int> e1;
  std::optional<double> theta_f;
  std::optional<double> theta_e;

  bool base = false;
  std::string method = "brute";
  std::uint64_t sims = 1000000;
  std::uint64_t seed = 20240101;
  std::string mue_ties = "midp";
  double p_step = 0.01;
};

/// One output file: name (relative to --out) and full contents.
struct OutputFile {
  std::string name;
  std::string content;
};

struct CommandResult {
  std::vector<OutputFile> files;
  int exit_code = 0;
};

inline constexpr const char* kVersion = "0.1.0";

/// Scenario after command-line overrides; its hash goes into every header.
Scenario effective_scenario(const Options& opts);

/// "# curtail <version> command=<cmd> scenario=<hash>".
std::string metadata_line(const std::string& command, const Scenario& scenario);

/// Design assembled from --family/--r/--n/... flags. Throws UsageError.
DesignRealisation design_from_options(const Options& opts);

CommandResult run_search(const Options& opts);
CommandResult run_block(const Options& opts);
CommandResult run_evaluate(const Options& opts);
CommandResult run_cp_matrix(const Options& opts);
CommandResult run_omni(const Options& opts);
CommandResult run_wald(const Options& opts);
CommandResult run_estimators(const Options& opts);
CommandResult run_audit(const Options& opts);

}  // namespace curtail::cli
