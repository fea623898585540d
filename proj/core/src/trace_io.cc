#include "arp/trace_io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace arp {
namespace {

using nlohmann::json;

std::string real(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt::format("{:.17g}", v);
}

std::string vec(const Vector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += real(v[i]);
  }
  return out + ']';
}

std::string counts(const EvaluationCounters& c) {
  std::string out = "[";
  for (size_t i = 0; i < c.by_order.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c.by_order[i]);
  }
  return out + ']';
}

std::string quoted(const std::string& s) { return json(s).dump(); }

/// Builds one flat JSON object with fields in insertion order.
class ObjectWriter {
 public:
  ObjectWriter& raw(const char* key, const std::string& value) {
    out_ += first_ ? "{" : ",";
    first_ = false;
    out_ += '"';
    out_ += key;
    out_ += "\":";
    out_ += value;
    return *this;
  }
  ObjectWriter& num(const char* key, double v) { return raw(key, real(v)); }
  ObjectWriter& integer(const char* key, std::int64_t v) { return raw(key, std::to_string(v)); }
  ObjectWriter& boolean(const char* key, bool v) { return raw(key, v ? "true" : "false"); }
  ObjectWriter& str(const char* key, const std::string& v) { return raw(key, quoted(v)); }
  std::string done() const { return first_ ? "{}" : out_ + '}'; }

 private:
  std::string out_;
  bool first_ = true;
};

std::string set_json(const FeasibleSet& set) {
  ObjectWriter w;
  w.str("kind", set.kind());
  if (const auto* box = std::get_if<FeasibleSet::Box>(&set.variant())) {
    w.raw("lower", vec(box->lower)).raw("upper", vec(box->upper));
  } else if (const auto* ball = std::get_if<FeasibleSet::Ball>(&set.variant())) {
    w.raw("center", vec(ball->center)).num("radius", ball->radius);
  }
  return w.done();
}

std::string config_json(const SolveConfig& c) {
  ObjectWriter sub;
  sub.integer("max_inner_iterations", c.subsolver.max_inner_iterations)
      .num("armijo_constant", c.subsolver.armijo_constant)
      .num("backtrack_factor", c.subsolver.backtrack_factor)
      .num("initial_trial_steplength", c.subsolver.initial_trial_steplength)
      .num("stall_tolerance", c.subsolver.stall_tolerance)
      .str("trial_steplength", c.subsolver.trial_steplength == TrialSteplength::BarzilaiBorwein
                                   ? "barzilai-borwein"
                                   : "warm-start");
  ObjectWriter w;
  w.integer("p", c.p)
      .num("r", c.r)
      .num("epsilon", c.epsilon)
      .num("eta1", c.eta1)
      .num("eta2", c.eta2)
      .num("gamma1", c.gamma1)
      .num("gamma2", c.gamma2)
      .num("gamma3", c.gamma3)
      .num("theta", c.theta)
      .num("sigma0", c.sigma0)
      .num("sigma_min", c.sigma_min)
      .num("alpha", c.alpha)
      .integer("max_outer_iterations", c.max_outer_iterations)
      .integer("max_consecutive_subsolver_failures", c.max_consecutive_subsolver_failures)
      .raw("subsolver", sub.done());
  return w.done();
}

double get_real(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw TraceFormatError(fmt::format("missing field '{}'", key));
  if (it->is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!it->is_number()) throw TraceFormatError(fmt::format("field '{}' is not a number", key));
  return it->get<double>();
}

template <typename T>
T get(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw TraceFormatError(fmt::format("missing field '{}'", key));
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw TraceFormatError(fmt::format("field '{}': {}", key, e.what()));
  }
}

Vector get_vector(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array()) {
    throw TraceFormatError(fmt::format("missing array field '{}'", key));
  }
  Vector v(static_cast<Eigen::Index>(it->size()));
  for (size_t i = 0; i < it->size(); ++i) {
    const auto& e = (*it)[i];
    v[static_cast<Eigen::Index>(i)] =
        e.is_null() ? std::numeric_limits<double>::quiet_NaN() : e.get<double>();
  }
  return v;
}

EvaluationCounters get_counters(const json& j, const char* key) {
  const auto values = get<std::vector<std::int64_t>>(j, key);
  if (values.size() < 2) throw TraceFormatError(fmt::format("field '{}' too short", key));
  EvaluationCounters c(static_cast<int>(values.size()) - 1);
  c.by_order = values;
  return c;
}

FeasibleSet parse_set(const json& j) {
  const auto kind = get<std::string>(j, "kind");
  if (kind == "whole-space") return FeasibleSet::whole_space();
  if (kind == "orthant") return FeasibleSet::nonnegative_orthant();
  if (kind == "box") return FeasibleSet::box(get_vector(j, "lower"), get_vector(j, "upper"));
  if (kind == "ball") return FeasibleSet::ball(get_vector(j, "center"), get_real(j, "radius"));
  throw TraceFormatError(fmt::format("unknown feasible set kind '{}'", kind));
}

SolveConfig parse_config(const json& j) {
  SolveConfig c;
  c.p = get<int>(j, "p");
  c.r = get_real(j, "r");
  c.epsilon = get_real(j, "epsilon");
  c.eta1 = get_real(j, "eta1");
  c.eta2 = get_real(j, "eta2");
  c.gamma1 = get_real(j, "gamma1");
  c.gamma2 = get_real(j, "gamma2");
  c.gamma3 = get_real(j, "gamma3");
  c.theta = get_real(j, "theta");
  c.sigma0 = get_real(j, "sigma0");
  c.sigma_min = get_real(j, "sigma_min");
  c.alpha = get_real(j, "alpha");
  c.max_outer_iterations = get<std::int64_t>(j, "max_outer_iterations");
  c.max_consecutive_subsolver_failures = get<int>(j, "max_consecutive_subsolver_failures");
  const auto& sub = get<json>(j, "subsolver");
  c.subsolver.max_inner_iterations = get<int>(sub, "max_inner_iterations");
  c.subsolver.armijo_constant = get_real(sub, "armijo_constant");
  c.subsolver.backtrack_factor = get_real(sub, "backtrack_factor");
  c.subsolver.initial_trial_steplength = get_real(sub, "initial_trial_steplength");
  c.subsolver.stall_tolerance = get_real(sub, "stall_tolerance");
  c.subsolver.trial_steplength = get<std::string>(sub, "trial_steplength") == "warm-start"
                                     ? TrialSteplength::WarmStart
                                     : TrialSteplength::BarzilaiBorwein;
  return c;
}

IterationRecord parse_record(const json& j) {
  IterationRecord r;
  r.index = get<std::int64_t>(j, "k");
  r.sigma = get_real(j, "sigma");
  r.point = get_vector(j, "x");
  r.step = get_vector(j, "s");
  r.step_norm = get_real(j, "step_norm");
  r.f_value = get_real(j, "f");
  r.trial_value = get_real(j, "f_trial");
  r.rho = get_real(j, "rho");
  r.pi_f_trial = get_real(j, "pi_f_trial");
  r.pi_model = get_real(j, "pi_model");
  r.model_decrease = get_real(j, "model_decrease");
  r.reg_model_decrease = get_real(j, "reg_model_decrease");
  r.actual_decrease = get_real(j, "actual_decrease");
  r.step_length_test = get<bool>(j, "step_length_test");
  r.classification = parse_classification(get<std::string>(j, "classification"));
  r.terminated_here = get<bool>(j, "terminated");
  r.subsolver_failed = get<bool>(j, "subsolver_failed");
  r.inner_iterations = get<int>(j, "inner_iterations");
  r.counters = get_counters(j, "counters");
  return r;
}

}  // namespace

void write_trace(std::ostream& out, const SolveReport& report) {
  ObjectWriter header;
  header.str("type", "header")
      .str("problem", report.problem)
      .integer("dimension", report.dimension)
      .num("beta", report.beta)
      .raw("config", config_json(report.config))
      .raw("set", set_json(report.set))
      .raw("start", vec(report.start))
      .str("status", to_string(report.status))
      .raw("final_point", vec(report.final_point))
      .num("final_value", report.final_value)
      .num("final_criticality", report.final_criticality)
      .integer("iterations", static_cast<std::int64_t>(report.iterations.size()))
      .integer("successful", report.successful_count)
      .integer("unsuccessful", report.unsuccessful_count)
      .raw("counters", counts(report.counters));
  std::string warnings = "[";
  for (size_t i = 0; i < report.warnings.size(); ++i) {
    if (i) warnings += ',';
    warnings += quoted(report.warnings[i]);
  }
  header.raw("warnings", warnings + "]");
  out << header.done() << '\n';

  for (const auto& r : report.iterations) {
    ObjectWriter w;
    w.str("type", "iteration")
        .integer("k", r.index)
        .num("sigma", r.sigma)
        .raw("x", vec(r.point))
        .raw("s", vec(r.step))
        .num("step_norm", r.step_norm)
        .num("f", r.f_value)
        .num("f_trial", r.trial_value)
        .num("rho", r.rho)
        .num("pi_f_trial", r.pi_f_trial)
        .num("pi_model", r.pi_model)
        .num("model_decrease", r.model_decrease)
        .num("reg_model_decrease", r.reg_model_decrease)
        .num("actual_decrease", r.actual_decrease)
        .boolean("step_length_test", r.step_length_test)
        .str("classification", to_string(r.classification))
        .boolean("terminated", r.terminated_here)
        .boolean("subsolver_failed", r.subsolver_failed)
        .integer("inner_iterations", r.inner_iterations)
        .raw("counters", counts(r.counters));
    out << w.done() << '\n';
  }
}

void write_trace_file(const std::string& path, const SolveReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  write_trace(out, report);
  if (!out) throw std::runtime_error(fmt::format("error writing '{}'", path));
}

SolveReport read_trace(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  SolveReport report;
  bool have_header = false;
  std::int64_t expected = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      const auto type = get<std::string>(j, "type");
      if (!have_header) {
        if (type != "header") throw TraceFormatError("first object must be the header");
        report.problem = get<std::string>(j, "problem");
        report.dimension = get<int>(j, "dimension");
        report.beta = get_real(j, "beta");
        report.config = parse_config(get<json>(j, "config"));
        report.set = parse_set(get<json>(j, "set"));
        report.start = get_vector(j, "start");
        report.status = parse_solve_status(get<std::string>(j, "status"));
        report.final_point = get_vector(j, "final_point");
        report.final_value = get_real(j, "final_value");
        report.final_criticality = get_real(j, "final_criticality");
        expected = get<std::int64_t>(j, "iterations");
        report.successful_count = get<std::int64_t>(j, "successful");
        report.unsuccessful_count = get<std::int64_t>(j, "unsuccessful");
        report.counters = get_counters(j, "counters");
        report.warnings = get<std::vector<std::string>>(j, "warnings");
        have_header = true;
      } else {
        if (type != "iteration") throw TraceFormatError(fmt::format("unexpected object type '{}'", type));
        report.iterations.push_back(parse_record(j));
      }
    } catch (const TraceFormatError& e) {
      throw TraceFormatError(fmt::format("line {}: {}", line_no, e.what()));
    } catch (const std::exception& e) {
      throw TraceFormatError(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  if (!have_header) throw TraceFormatError("trace is empty (no header object)");
  if (static_cast<std::int64_t>(report.iterations.size()) != expected) {
    throw TraceFormatError(fmt::format("header announces {} iterations, found {}", expected,
                                       report.iterations.size()));
  }
  return report;
}

SolveReport read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceFormatError(fmt::format("cannot open '{}'", path));
  return read_trace(in);
}

std::string summary_csv_header() {
  return "problem,n,p,r,beta,epsilon,status,iterations,successful,unsuccessful,evals_value,"
         "evals_gradient,evals_high_order,final_criticality,final_value\n";
}

std::int64_t high_order_evaluations(const SolveReport& report) {
  return report.config.p >= 2 ? report.counters.order(2) : 0;
}

std::string summary_csv_row(const SolveReport& report) {
  return fmt::format("{},{},{},{:.6g},{:.6g},{:.6g},{},{},{},{},{},{},{},{:.6g},{:.6g}\n",
                     report.problem, report.dimension, report.config.p, report.config.r,
                     report.beta, report.config.epsilon, to_string(report.status),
                     report.iterations.size(), report.successful_count,
                     report.unsuccessful_count, report.counters.values(),
                     report.counters.gradients(), high_order_evaluations(report),
                     report.final_criticality, report.final_value);
}

}  // namespace arp
