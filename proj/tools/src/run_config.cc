#include "arp_cli/run_config.hpp"

#include "arp/model.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace arp::cli {
namespace {

struct Field {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Field>;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"problem", {"name", "n", "q"}},
      {"set", {"type", "lower", "upper", "center", "radius"}},
      {"start", {"point"}},
      {"algorithm",
       {"p", "r", "epsilon", "eta1", "eta2", "gamma1", "gamma2", "gamma3", "theta", "sigma0",
        "sigma_min", "alpha", "max_outer_iterations", "max_consecutive_subsolver_failures",
        "scale_by_factorial", "sigma0_bar", "theta_bar"}},
      {"subsolver",
       {"max_inner_iterations", "armijo_constant", "backtrack_factor", "initial_trial_steplength",
        "stall_tolerance", "trial_steplength"}},
      {"sweep", {"start", "ratio", "count", "grid"}},
      {"output", {"directory"}},
  };
  return keys;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

class Reader {
 public:
  Reader(std::string source, std::map<std::string, Section> sections)
      : source_(std::move(source)), sections_(std::move(sections)) {}

  bool has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
  }
  bool has_section(const std::string& section) const { return sections_.count(section) > 0; }

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const {
    const int line = has(section, key) ? sections_.at(section).at(key).line : 0;
    if (line > 0) throw ConfigError(fmt::format("{}:{}: [{}] {}: {}", source_, line, section, key, message));
    throw ConfigError(fmt::format("{}: [{}] {}: {}", source_, section, key, message));
  }

  std::optional<std::string> text(const std::string& section, const std::string& key) const {
    if (!has(section, key)) return std::nullopt;
    return sections_.at(section).at(key).value;
  }

  std::optional<double> number(const std::string& section, const std::string& key) const {
    auto raw = text(section, key);
    if (!raw) return std::nullopt;
    return parse_number(section, key, *raw);
  }

  std::optional<std::int64_t> integer(const std::string& section, const std::string& key) const {
    auto raw = text(section, key);
    if (!raw) return std::nullopt;
    std::int64_t value = 0;
    const auto [end, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), value);
    if (ec != std::errc() || end != raw->data() + raw->size()) {
      fail(section, key, fmt::format("expected an integer, got '{}'", *raw));
    }
    return value;
  }

  std::optional<bool> boolean(const std::string& section, const std::string& key) const {
    auto raw = text(section, key);
    if (!raw) return std::nullopt;
    if (*raw == "true" || *raw == "yes" || *raw == "1") return true;
    if (*raw == "false" || *raw == "no" || *raw == "0") return false;
    fail(section, key, fmt::format("expected true or false, got '{}'", *raw));
  }

  std::optional<std::vector<double>> list(const std::string& section, const std::string& key) const {
    auto raw = text(section, key);
    if (!raw) return std::nullopt;
    std::string spaced = *raw;
    for (char& c : spaced) {
      if (c == ',') c = ' ';
    }
    std::istringstream words(spaced);
    std::vector<double> out;
    for (std::string word; words >> word;) out.push_back(parse_number(section, key, word));
    if (out.empty()) fail(section, key, "expected at least one number");
    return out;
  }

 private:
  double parse_number(const std::string& section, const std::string& key, const std::string& raw) const {
    double value = 0.0;
    const char* first = raw.data();
    if (!raw.empty() && raw[0] == '+') ++first;
    const auto [end, ec] = std::from_chars(first, raw.data() + raw.size(), value);
    if (ec != std::errc() || end != raw.data() + raw.size() || std::isnan(value)) {
      fail(section, key, fmt::format("expected a number, got '{}'", raw));
    }
    return value;
  }

  std::string source_;
  std::map<std::string, Section> sections_;
};

std::map<std::string, Section> tokenize(std::istream& in, const std::string& source) {
  std::map<std::string, Section> sections;
  std::string current;
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    const auto comment = raw.find_first_of("#;");
    const std::string content = trim(std::string_view(raw).substr(0, comment));
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']') throw ConfigError(fmt::format("{}:{}: unterminated section header", source, line));
      current = trim(std::string_view(content).substr(1, content.size() - 2));
      if (!known_keys().count(current)) {
        throw ConfigError(fmt::format("{}:{}: unknown section [{}]", source, line, current));
      }
      if (sections.count(current)) {
        throw ConfigError(fmt::format("{}:{}: section [{}] appears twice", source, line, current));
      }
      sections[current];
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, line));
    }
    if (current.empty()) {
      throw ConfigError(fmt::format("{}:{}: setting outside of any section", source, line));
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (!known_keys().at(current).count(key)) {
      throw ConfigError(fmt::format("{}:{}: [{}] unknown key '{}'", source, line, current, key));
    }
    if (value.empty()) throw ConfigError(fmt::format("{}:{}: [{}] {}: missing value", source, line, current, key));
    auto [it, inserted] = sections[current].emplace(key, Field{value, line});
    if (!inserted) {
      throw ConfigError(fmt::format("{}:{}: [{}] {} repeats line {}", source, line, current, key, it->second.line));
    }
  }
  return sections;
}

CorpusEntry read_problem(const Reader& r) {
  auto name = r.text("problem", "name");
  if (!name) throw ConfigError("missing required setting [problem] name");
  const auto n = r.integer("problem", "n").value_or(0);
  if (n < 0) r.fail("problem", "n", "dimension must be positive");
  std::string full = *name;
  if (auto q = r.text("problem", "q")) {
    if (full != "holder-power" && full != "shifted-holder") {
      r.fail("problem", "q", fmt::format("only holder-power and shifted-holder take q, not '{}'", full));
    }
    r.number("problem", "q");  // validates the literal
    full = fmt::format("{}({})", full, *q);
  }
  try {
    return make_entry(full, static_cast<int>(n));
  } catch (const std::exception& e) {
    r.fail("problem", "name", e.what());
  }
}

Vector vector_of(const Reader& r, const std::string& section, const std::string& key, int n) {
  auto values = *r.list(section, key);
  if (values.size() == 1 && n > 1) values.assign(static_cast<size_t>(n), values.front());
  if (static_cast<int>(values.size()) != n) {
    r.fail(section, key, fmt::format("expected {} values for dimension {}, got {}", n, n, values.size()));
  }
  return Eigen::Map<const Vector>(values.data(), n);
}

FeasibleSet read_set(const Reader& r, const CorpusEntry& entry) {
  if (!r.has_section("set")) return entry.default_set;
  const std::string type = r.text("set", "type").value_or("default");
  const int n = entry.dimension();
  auto require = [&](const char* key) {
    if (!r.has("set", key)) r.fail("set", key, fmt::format("required for a {} set", type));
  };
  try {
    if (type == "default") return entry.default_set;
    if (type == "whole-space") return FeasibleSet::whole_space();
    if (type == "orthant") return FeasibleSet::nonnegative_orthant();
    if (type == "box") {
      require("lower");
      require("upper");
      return FeasibleSet::box(vector_of(r, "set", "lower", n), vector_of(r, "set", "upper", n));
    }
    if (type == "ball") {
      require("radius");
      const Vector center = r.has("set", "center") ? vector_of(r, "set", "center", n) : Vector::Zero(n);
      return FeasibleSet::ball(center, *r.number("set", "radius"));
    }
  } catch (const std::invalid_argument& e) {
    r.fail("set", "type", e.what());
  }
  r.fail("set", "type", fmt::format("unknown set type '{}' (whole-space, box, ball, orthant)", type));
}

SolveConfig read_algorithm(const Reader& r) {
  const std::string s = "algorithm";
  const auto p = r.integer(s, "p").value_or(2);
  if (p < 1 || p > 32) r.fail(s, "p", fmt::format("p must be a positive integer (got {})", p));
  const double r_power = r.number(s, "r").value_or(static_cast<double>(p) + 1.0);
  const double epsilon = r.number(s, "epsilon").value_or(1e-6);
  SolveConfig c = SolveConfig::for_order(static_cast<int>(p), r_power, epsilon);

  const bool scale = r.boolean(s, "scale_by_factorial").value_or(true);
  const double scaling = scale ? factorial(static_cast<int>(p) - 1) : 1.0;
  c.sigma0 = r.number(s, "sigma0").value_or(r.number(s, "sigma0_bar").value_or(kSigma0Bar) / scaling);
  c.theta = r.number(s, "theta").value_or(r.number(s, "theta_bar").value_or(kThetaBar) / scaling);
  if (r.has(s, "sigma0") && r.has(s, "sigma0_bar")) r.fail(s, "sigma0", "give either sigma0 or sigma0_bar, not both");
  if (r.has(s, "theta") && r.has(s, "theta_bar")) r.fail(s, "theta", "give either theta or theta_bar, not both");

  c.eta1 = r.number(s, "eta1").value_or(c.eta1);
  c.eta2 = r.number(s, "eta2").value_or(c.eta2);
  c.gamma1 = r.number(s, "gamma1").value_or(c.gamma1);
  c.gamma2 = r.number(s, "gamma2").value_or(c.gamma2);
  c.gamma3 = r.number(s, "gamma3").value_or(c.gamma3);
  c.sigma_min = r.number(s, "sigma_min").value_or(c.sigma_min);
  c.alpha = r.number(s, "alpha").value_or(c.alpha);
  c.max_outer_iterations = r.integer(s, "max_outer_iterations").value_or(c.max_outer_iterations);
  c.max_consecutive_subsolver_failures = static_cast<int>(
      r.integer(s, "max_consecutive_subsolver_failures").value_or(c.max_consecutive_subsolver_failures));

  const std::string sub = "subsolver";
  auto& ss = c.subsolver;
  ss.max_inner_iterations = static_cast<int>(r.integer(sub, "max_inner_iterations").value_or(ss.max_inner_iterations));
  ss.armijo_constant = r.number(sub, "armijo_constant").value_or(ss.armijo_constant);
  ss.backtrack_factor = r.number(sub, "backtrack_factor").value_or(ss.backtrack_factor);
  ss.initial_trial_steplength = r.number(sub, "initial_trial_steplength").value_or(ss.initial_trial_steplength);
  ss.stall_tolerance = r.number(sub, "stall_tolerance").value_or(ss.stall_tolerance);
  if (auto mode = r.text(sub, "trial_steplength")) {
    if (*mode == "barzilai-borwein") {
      ss.trial_steplength = TrialSteplength::BarzilaiBorwein;
    } else if (*mode == "warm-start") {
      ss.trial_steplength = TrialSteplength::WarmStart;
    } else {
      r.fail(sub, "trial_steplength", fmt::format("expected barzilai-borwein or warm-start, got '{}'", *mode));
    }
  }

  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    // Messages lead with the offending field, e.g. "eta2 must satisfy ...".
    const std::string message = e.what();
    std::string field = message.substr(0, message.find(' '));
    std::string section = s;
    if (field.rfind("subsolver.", 0) == 0) {
      section = sub;
      field = field.substr(10);
    }
    r.fail(section, field, message);
  }
  return c;
}

std::optional<SweepSpec> read_sweep(const Reader& r) {
  if (!r.has_section("sweep")) return std::nullopt;
  SweepSpec spec;
  spec.start = r.number("sweep", "start").value_or(spec.start);
  spec.ratio = r.number("sweep", "ratio").value_or(spec.ratio);
  spec.count = static_cast<int>(r.integer("sweep", "count").value_or(spec.count));
  if (r.has("sweep", "grid")) {
    for (const char* key : {"start", "ratio", "count"}) {
      if (r.has("sweep", key)) r.fail("sweep", key, "cannot be combined with an explicit grid");
    }
    spec.grid = r.list("sweep", "grid");
  }
  const auto grid = spec.epsilons();
  const char* key = spec.grid ? "grid" : "count";
  if (grid.size() < 4) r.fail("sweep", key, fmt::format("a sweep needs at least 4 points, got {}", grid.size()));
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] <= 1.0)) {
      r.fail("sweep", spec.grid ? "grid" : "start", fmt::format("epsilon values must lie in (0, 1], got {}", grid[i]));
    }
    if (i > 0 && !(grid[i] < grid[i - 1])) r.fail("sweep", "grid", "epsilon values must be strictly decreasing");
  }
  if (!spec.grid && !(spec.ratio > 1.0)) r.fail("sweep", "ratio", "ratio must exceed 1");
  return spec;
}

}  // namespace

std::vector<double> SweepSpec::epsilons() const {
  if (grid) return *grid;
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(start / std::pow(ratio, i));
  return out;
}

RunConfig parse_run_config(std::istream& in, const std::string& source) {
  const Reader r(source, tokenize(in, source));
  RunConfig config;
  config.entry = read_problem(r);
  config.set = read_set(r, config.entry);
  config.solve = read_algorithm(r);
  if (!config.entry.supports(config.solve.p)) {
    r.fail("algorithm", "p",
           fmt::format("{} supplies derivatives up to order {}, p = {} requested", config.entry.name,
                       config.entry.supported_orders(), config.solve.p));
  }

  const auto point = r.text("start", "point");
  if (!point || *point == "default") {
    config.start = config.entry.default_start;
  } else {
    config.start = vector_of(r, "start", "point", config.entry.dimension());
  }
  if (!config.set.contains(config.start)) {
    r.fail("start", "point", "starting point is not in the feasible set");
  }
  config.sweep = read_sweep(r);

  namespace fs = std::filesystem;
  fs::path dir = r.text("output", "directory").value_or(".");
  if (dir.is_relative()) dir = fs::path(source).parent_path() / dir;
  config.output_directory = dir.lexically_normal().string();
  if (config.output_directory.empty()) config.output_directory = ".";
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open configuration file", path));
  return parse_run_config(in, path);
}

}  // namespace arp::cli
