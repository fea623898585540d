#include "arp/driver.hpp"

#include "arp/model.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace arp {

SolveConfig SolveConfig::for_order(int p, double r, double epsilon) {
  SolveConfig config;
  config.p = p;
  config.r = r;
  config.epsilon = epsilon;
  if (p >= 1) {
    config.theta = kThetaBar / factorial(p - 1);
    config.sigma0 = kSigma0Bar / factorial(p - 1);
  }
  return config;
}

void SolveConfig::validate() const {
  auto fail = [](const std::string& message) { throw std::invalid_argument(message); };
  if (p < 1) fail(fmt::format("p must be a positive integer (got {})", p));
  if (!(r > p) || !std::isfinite(r)) fail(fmt::format("r must satisfy r > p (got r = {}, p = {})", r, p));
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    fail(fmt::format("epsilon must be positive (got {})", epsilon));
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) fail(fmt::format("theta must satisfy theta > 0 (got {})", theta));
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) fail(fmt::format("sigma0 must be positive (got {})", sigma0));
  if (!(sigma_min >= 0.0 && sigma_min <= sigma0)) {
    fail(fmt::format("sigma_min must satisfy 0 < sigma_min <= sigma0 (got sigma_min = {}, sigma0 = {})",
                     sigma_min, sigma0));
  }
  if (sigma_min == 0.0 && r < p + 1) {
    fail(fmt::format("sigma_min = 0 is only allowed when r >= p + 1 (got r = {}, p = {})", r, p));
  }
  if (!(eta1 > 0.0)) fail(fmt::format("eta1 must satisfy 0 < eta1 <= eta2 < 1 (got eta1 = {})", eta1));
  if (!(eta1 <= eta2)) {
    fail(fmt::format("eta1 must satisfy 0 < eta1 <= eta2 < 1 (got eta1 = {}, eta2 = {})", eta1, eta2));
  }
  if (!(eta2 < 1.0)) fail(fmt::format("eta2 must satisfy 0 < eta1 <= eta2 < 1 (got eta2 = {})", eta2));
  if (!(gamma3 > 0.0 && gamma3 < 1.0)) {
    fail(fmt::format("gamma3 must satisfy 0 < gamma3 < 1 < gamma1 < gamma2 (got gamma3 = {})", gamma3));
  }
  if (!(gamma1 > 1.0)) {
    fail(fmt::format("gamma1 must satisfy 0 < gamma3 < 1 < gamma1 < gamma2 (got gamma1 = {})", gamma1));
  }
  if (!(gamma2 > gamma1) || !std::isfinite(gamma2)) {
    fail(fmt::format("gamma2 must satisfy 0 < gamma3 < 1 < gamma1 < gamma2 (got gamma1 = {}, gamma2 = {})",
                     gamma1, gamma2));
  }
  if (!(alpha > 0.0 && alpha <= 1.0 / 3.0)) {
    fail(fmt::format("alpha must lie in (0, 1/3] (got {})", alpha));
  }
  if (max_outer_iterations < 1) fail("max_outer_iterations must be positive");
  if (max_consecutive_subsolver_failures < 1) fail("max_consecutive_subsolver_failures must be positive");
  subsolver.validate();
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::VerySuccessful: return "VerySuccessful";
    case Classification::Successful: return "Successful";
    case Classification::Unsuccessful: return "Unsuccessful";
  }
  return "?";
}

Classification parse_classification(const std::string& text) {
  if (text == "VerySuccessful") return Classification::VerySuccessful;
  if (text == "Successful") return Classification::Successful;
  if (text == "Unsuccessful") return Classification::Unsuccessful;
  throw std::invalid_argument(fmt::format("unknown classification '{}'", text));
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::ConvergedAtStart: return "ConvergedAtStart";
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::IterationLimit: return "IterationLimit";
    case SolveStatus::SubsolverFailureLimit: return "SubsolverFailureLimit";
  }
  return "?";
}

SolveStatus parse_solve_status(const std::string& text) {
  for (auto status : {SolveStatus::ConvergedAtStart, SolveStatus::Converged,
                      SolveStatus::IterationLimit, SolveStatus::SubsolverFailureLimit}) {
    if (text == to_string(status)) return status;
  }
  throw std::invalid_argument(fmt::format("unknown solve status '{}'", text));
}

bool step_length_condition(double sigma, double step_norm, double pi_f_trial, double r,
                           double alpha) {
  return sigma * std::pow(step_norm, r - 1.0) >= alpha * pi_f_trial;
}

Classification classify_iteration(double rho, bool step_length_ok, const SolveConfig& config) {
  if (!step_length_ok || !(rho >= config.eta1)) return Classification::Unsuccessful;
  return rho >= config.eta2 ? Classification::VerySuccessful : Classification::Successful;
}

double update_sigma(double sigma, double rho, bool step_length_ok, const SolveConfig& config) {
  switch (classify_iteration(rho, step_length_ok, config)) {
    case Classification::VerySuccessful: return std::max(config.sigma_min, config.gamma3 * sigma);
    case Classification::Successful: return sigma;
    case Classification::Unsuccessful: return config.gamma1 * sigma;
  }
  return sigma;
}

SolveReport run(const Problem& problem, const ProblemMeta& meta, const FeasibleSet& set,
                const Vector& x0, const SolveConfig& config) {
  config.validate();
  if (problem.max_order() < config.p) {
    throw std::invalid_argument(fmt::format("{} supplies derivatives up to order {}, p = {} requested",
                                            problem.name(), problem.max_order(), config.p));
  }
  if (x0.size() != problem.dimension()) {
    throw std::invalid_argument(fmt::format("starting point has {} coordinates, {} expects {}",
                                            x0.size(), problem.name(), problem.dimension()));
  }
  require_finite(x0, "starting point");
  if (!set.contains(x0)) throw std::invalid_argument("starting point is not feasible");

  SolveReport report;
  report.problem = problem.name();
  report.dimension = problem.dimension();
  report.beta = std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : meta.smoothness) {
    if (s.order == config.p) report.beta = s.beta;
  }
  report.config = config;
  report.set = set;
  report.start = x0;
  if (config.epsilon > 1.0) {
    report.warnings.push_back(fmt::format(
        "epsilon = {} exceeds 1; complexity bounds assume epsilon in (0, 1]", config.epsilon));
  }

  CountedProblem counted(problem);
  Vector x = x0;
  double fx = counted.value(x);
  Vector gx = counted.gradient(x);
  double pi_x = criticality(set, x, gx);

  auto finish = [&](SolveStatus status, Vector point, double value, double pi) {
    report.status = status;
    report.final_point = std::move(point);
    report.final_value = value;
    report.final_criticality = pi;
    report.counters = counted.counters();
    return report;
  };

  if (pi_x < config.epsilon) return finish(SolveStatus::ConvergedAtStart, x, fx, pi_x);

  double sigma = config.sigma0;
  int consecutive_failures = 0;
  bool capture = true;
  std::optional<TaylorModel> taylor;

  for (std::int64_t k = 0; k < config.max_outer_iterations; ++k) {
    if (capture) {
      taylor.emplace(TaylorModel::capture(counted, x, fx, gx, config.p));
      capture = false;
    }
    const RegularizedModel model(*taylor, sigma, config.r);
    const SubsolverResult inner = solve_subproblem(model, set, x, config.theta, config.subsolver);
    if (inner.status == SubsolverStatus::ModelCritical) {
      throw std::logic_error(fmt::format(
          "iteration {}: model is critical at s = 0 although pi_f(x_k) = {} >= epsilon", k, pi_x));
    }

    IterationRecord rec;
    rec.index = k;
    rec.sigma = sigma;
    rec.point = x;
    rec.step = inner.step;
    rec.step_norm = inner.step.norm();
    rec.f_value = fx;
    rec.pi_model = inner.model_criticality;
    rec.reg_model_decrease = inner.model_decrease;
    rec.inner_iterations = inner.inner_iterations;

    if (!inner.ok()) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rec.subsolver_failed = true;
      rec.trial_value = rec.rho = rec.pi_f_trial = rec.actual_decrease = nan;
      rec.model_decrease = taylor->decrease(inner.step);
      rec.classification = Classification::Unsuccessful;
      rec.counters = counted.counters();
      report.iterations.push_back(std::move(rec));
      ++report.unsuccessful_count;
      sigma *= config.gamma1;
      if (++consecutive_failures >= config.max_consecutive_subsolver_failures) {
        return finish(SolveStatus::SubsolverFailureLimit, x, fx, pi_x);
      }
      continue;
    }
    consecutive_failures = 0;

    // Termination test at the trial point.
    const Vector trial = x + inner.step;
    const Vector g_trial = counted.gradient(trial);
    const double pi_trial = criticality(set, trial, g_trial);
    const bool terminate = pi_trial < config.epsilon;

    // Acceptance test. The terminal iteration is classified too, for the trace.
    const double f_trial = counted.value(trial);
    const double model_decrease = taylor->decrease(inner.step);
    if (!(model_decrease > 0.0)) {
      throw std::logic_error(fmt::format(
          "iteration {}: Taylor decrease {} is not positive although the step decreases the model",
          k, model_decrease));
    }
    const double actual_decrease = fx - f_trial;
    const double rho = actual_decrease / model_decrease;
    const bool step_ok = step_length_condition(sigma, rec.step_norm, pi_trial, config.r, config.alpha);
    const Classification cls = classify_iteration(rho, step_ok, config);

    rec.trial_value = f_trial;
    rec.rho = rho;
    rec.pi_f_trial = pi_trial;
    rec.model_decrease = model_decrease;
    rec.actual_decrease = actual_decrease;
    rec.step_length_test = step_ok;
    rec.classification = cls;
    rec.terminated_here = terminate;
    rec.counters = counted.counters();
    report.iterations.push_back(std::move(rec));
    if (is_successful(cls)) {
      ++report.successful_count;
    } else {
      ++report.unsuccessful_count;
    }

    if (terminate) return finish(SolveStatus::Converged, trial, f_trial, pi_trial);

    if (is_successful(cls)) {
      x = trial;
      fx = f_trial;
      gx = g_trial;
      pi_x = pi_trial;
      capture = true;
    }
    sigma = update_sigma(sigma, rho, step_ok, config);
  }
  return finish(SolveStatus::IterationLimit, x, fx, pi_x);
}

}  // namespace arp
