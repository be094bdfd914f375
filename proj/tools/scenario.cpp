#include "scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace curtail::cli {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "name",          "alpha",           "beta",          "p0",
      "p1",            "n_min",           "n_max",         "n_max_by_family",
      "r_rule",        "theta_e_min",     "theta_f_below_p1", "theta_tail_skip",
      "weight_grid_step", "families",     "reference_family", "dominance",
      "simon_cap_factor", "block_sizes",  "output_dir",
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& message) const {
    const int line = mark.line < 0 ? 0 : mark.line + 1;
    throw ScenarioError(origin_ + ":" + std::to_string(line) + ": " + message);
  }

  template <class T>
  T as(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node.Mark(), "'" + key + "' must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node.Mark(), "'" + key + "' has an invalid value '" + node.Scalar() + "'");
    }
  }

  std::vector<std::string> strings(const YAML::Node& node, const std::string& key) const {
    if (!node.IsSequence()) fail(node.Mark(), "'" + key + "' must be a list");
    std::vector<std::string> out;
    for (const auto& item : node) out.push_back(as<std::string>(item, key));
    return out;
  }

 private:
  std::string origin_;
};

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  const Reader rd(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    rd.fail(e.mark, e.msg);
  }
  if (!root.IsMap()) rd.fail(root.Mark(), "scenario must be a mapping of keys to values");

  Scenario sc;
  SearchConfig& c = sc.config;
  c.families.clear();
  YAML::Mark params_mark = root.Mark();
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (!known_keys().count(key)) rd.fail(kv.first.Mark(), "unknown key '" + key + "'");
    if (key == "name") {
      sc.name = rd.as<std::string>(v, key);
    } else if (key == "alpha") {
      c.params.alpha = rd.as<double>(v, key);
      params_mark = v.Mark();
    } else if (key == "beta") {
      c.params.beta = rd.as<double>(v, key);
      params_mark = v.Mark();
    } else if (key == "p0") {
      c.params.p0 = rd.as<double>(v, key);
      params_mark = v.Mark();
    } else if (key == "p1") {
      c.params.p1 = rd.as<double>(v, key);
      params_mark = v.Mark();
    } else if (key == "n_min") {
      c.n_min = rd.as<int>(v, key);
    } else if (key == "n_max") {
      c.n_max = rd.as<int>(v, key);
    } else if (key == "n_max_by_family") {
      if (!v.IsMap()) rd.fail(v.Mark(), "'n_max_by_family' must be a mapping");
      for (const auto& fam : v) {
        const std::string name = fam.first.as<std::string>();
        try {
          c.n_max_by_family[DesignFamily::parse(name).name()] = rd.as<int>(fam.second, name);
        } catch (const std::invalid_argument& e) {
          rd.fail(fam.first.Mark(), e.what());
        }
      }
    } else if (key == "r_rule") {
      const auto s = rd.as<std::string>(v, key);
      if (s == "ahern") {
        c.r_rule = RBoundRule::AHern;
      } else if (s == "wald") {
        c.r_rule = RBoundRule::Wald;
      } else {
        rd.fail(v.Mark(), "'r_rule' must be ahern or wald");
      }
    } else if (key == "theta_e_min") {
      c.theta_e_min = rd.as<double>(v, key);
    } else if (key == "theta_f_below_p1") {
      c.theta_f_below_p1 = rd.as<bool>(v, key);
    } else if (key == "theta_tail_skip") {
      c.theta_tail_skip = rd.as<int>(v, key);
    } else if (key == "weight_grid_step") {
      c.weight_grid_step = rd.as<double>(v, key);
    } else if (key == "families") {
      for (const auto& s : rd.strings(v, key)) {
        try {
          c.families.push_back(DesignFamily::parse(s));
        } catch (const std::invalid_argument& e) {
          rd.fail(v.Mark(), e.what());
        }
      }
    } else if (key == "reference_family") {
      try {
        c.reference_family = DesignFamily::parse(rd.as<std::string>(v, key));
      } catch (const std::invalid_argument& e) {
        rd.fail(v.Mark(), e.what());
      }
    } else if (key == "dominance") {
      const auto s = rd.as<std::string>(v, key);
      if (s == "exact") {
        c.dominance = DominanceMode::Exact;
      } else if (s == "rounded") {
        c.dominance = DominanceMode::Rounded;
      } else {
        rd.fail(v.Mark(), "'dominance' must be exact or rounded");
      }
    } else if (key == "simon_cap_factor") {
      c.simon_cap_factor = rd.as<double>(v, key);
    } else if (key == "block_sizes") {
      if (!v.IsSequence()) rd.fail(v.Mark(), "'block_sizes' must be a list");
      for (const auto& item : v) {
        const int b = rd.as<int>(item, key);
        if (b < 1) rd.fail(item.Mark(), "block sizes must be positive");
        sc.block_sizes.push_back(b);
      }
    } else if (key == "output_dir") {
      sc.output_dir = rd.as<std::string>(v, key);
    }
  }
  if (c.families.empty()) {
    c.families = {DesignFamily::simon(), DesignFamily::simon_go(), DesignFamily::nsc(), DesignFamily::sc(),
                  DesignFamily::m_stage()};
  }
  try {
    c.params.validate();
  } catch (const std::domain_error& e) {
    rd.fail(params_mark, e.what());
  }
  try {
    c.validate();
  } catch (const std::domain_error& e) {
    rd.fail(root.Mark(), e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ":0: cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string canonical_form(const Scenario& s) {
  const SearchConfig& c = s.config;
  std::ostringstream out;
  out << "name=" << s.name << "\n"
      << "alpha=" << g17(c.params.alpha) << "\nbeta=" << g17(c.params.beta) << "\np0=" << g17(c.params.p0)
      << "\np1=" << g17(c.params.p1) << "\nn_min=" << c.n_min << "\nn_max=" << c.n_max << "\n";
  for (const auto& [fam, n] : c.n_max_by_family) out << "n_max." << fam << "=" << n << "\n";
  out << "r_rule=" << (c.r_rule == RBoundRule::AHern ? "ahern" : "wald") << "\ntheta_e_min=" << g17(c.theta_e_min)
      << "\ntheta_f_below_p1=" << c.theta_f_below_p1 << "\ntheta_tail_skip=" << c.theta_tail_skip
      << "\nweight_grid_step=" << g17(c.weight_grid_step) << "\nfamilies=";
  for (const auto& f : c.families) out << f.name() << ",";
  out << "\nreference_family=" << c.reference_family.name()
      << "\ndominance=" << (c.dominance == DominanceMode::Exact ? "exact" : "rounded")
      << "\nsimon_cap_factor=" << g17(c.simon_cap_factor) << "\nblock_sizes=";
  for (int b : s.block_sizes) out << b << ",";
  out << "\n";
  return out.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string scenario_hash(const Scenario& scenario) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_form(scenario))));
  return buf;
}

}  // namespace curtail::cli
