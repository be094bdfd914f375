#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "curtail/search.hpp"

namespace curtail::cli {

/// Malformed scenario file; what() carries "<file>:<line>: <message>".
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string name = "unnamed";
  SearchConfig config;
  std::vector<int> block_sizes;
  std::string output_dir;
};

/// Parses a YAML scenario document. Unknown keys, wrong types and invalid
/// probabilities are rejected with the offending line number.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>");
Scenario load_scenario(const std::string& path);

/// Stable textual form of everything that affects results.
std::string canonical_form(const Scenario& scenario);

std::uint64_t fnv1a(const std::string& text);

/// 16 hex digits of fnv1a(canonical_form(scenario)).
std::string scenario_hash(const Scenario& scenario);

}  // namespace curtail::cli
