#include "arp/subsolver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arp {
namespace {

constexpr double kModelCriticalThreshold = 1e-15;
constexpr int kMaxBacktracks = 200;
constexpr double kMinTrialSteplength = 1e-300;
constexpr double kMaxTrialSteplength = 1e300;

}  // namespace

void SubsolverConfig::validate() const {
  if (max_inner_iterations < 1) {
    throw std::invalid_argument("subsolver.max_inner_iterations must be positive");
  }
  if (!(armijo_constant > 0.0 && armijo_constant < 1.0)) {
    throw std::invalid_argument("subsolver.armijo_constant must lie in (0, 1)");
  }
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw std::invalid_argument("subsolver.backtrack_factor must lie in (0, 1)");
  }
  if (!(initial_trial_steplength > 0.0) || !std::isfinite(initial_trial_steplength)) {
    throw std::invalid_argument("subsolver.initial_trial_steplength must be positive");
  }
  if (!(stall_tolerance > 0.0)) {
    throw std::invalid_argument("subsolver.stall_tolerance must be positive");
  }
}

const char* to_string(SubsolverStatus status) {
  switch (status) {
    case SubsolverStatus::Success: return "Success";
    case SubsolverStatus::ModelCritical: return "ModelCritical";
    case SubsolverStatus::InnerBudgetExhausted: return "InnerBudgetExhausted";
  }
  return "?";
}

StepConditions evaluate_step_conditions(const RegularizedModel& model, const FeasibleSet& set,
                                        const Vector& x_k, const Vector& s, double theta) {
  StepConditions out;
  out.feasible = set.contains(x_k + s);
  out.model_decrease = model.decrease(s);
  out.criticality_target = theta * std::pow(s.norm(), model.power() - 1.0);
  out.model_criticality = out.feasible
                              ? criticality(set.translated(x_k), s, model.gradient(s))
                              : std::numeric_limits<double>::infinity();
  return out;
}

SubsolverResult solve_subproblem(const RegularizedModel& model, const FeasibleSet& set,
                                 const Vector& x_k, double theta, const SubsolverConfig& config) {
  if (!(theta > 0.0)) throw std::invalid_argument("solve_subproblem: theta must be positive");
  config.validate();

  // Steps live in shifted coordinates: {s : x_k + s in set}.
  const FeasibleSet shifted = set.translated(x_k);
  SubsolverResult result;
  Vector s = Vector::Zero(x_k.size());
  Vector g = model.gradient(s);

  result.step = s;
  result.model_value = model.taylor().base_value();
  result.model_criticality = criticality(shifted, s, g);
  if (result.model_criticality < kModelCriticalThreshold) {
    result.status = SubsolverStatus::ModelCritical;
    return result;
  }

  const double c = config.armijo_constant;
  double t = config.initial_trial_steplength;
  Vector previous_s;
  Vector previous_g;

  for (int it = 1; it <= config.max_inner_iterations; ++it) {
    double trial = it == 1 ? t : t / config.backtrack_factor;
    if (config.trial_steplength == TrialSteplength::BarzilaiBorwein && it > 1) {
      const Vector ds = s - previous_s;
      const Vector dg = g - previous_g;
      const double curvature = ds.dot(dg);
      if (curvature > 0.0) trial = ds.squaredNorm() / curvature;
    }
    trial = std::clamp(trial, kMinTrialSteplength, kMaxTrialSteplength);

    Vector candidate;
    bool accepted = false;
    for (int bt = 0; bt <= kMaxBacktracks; ++bt) {
      candidate = shifted.project(s - trial * g);
      const Vector delta = candidate - s;
      const double moved = delta.squaredNorm();
      if (moved == 0.0) break;
      // Differencing model values loses all accuracy once the steps are
      // tiny, so the gain is integrated along the segment instead.
      if (-model.change(s, delta) >= c * moved / trial) {
        accepted = true;
        break;
      }
      trial *= config.backtrack_factor;
      if (trial < kMinTrialSteplength) break;
    }
    result.inner_iterations = it;
    if (!accepted) break;

    const double movement = (candidate - s).norm();
    previous_s = std::move(s);
    previous_g = std::move(g);
    s = std::move(candidate);
    g = model.gradient(s);
    t = trial;

    const double decrease = model.decrease(s);
    result.step = s;
    result.model_decrease = decrease;
    result.model_value = model.taylor().base_value() - decrease;
    if (config.on_accept) config.on_accept(it, s, decrease);
    result.model_criticality = criticality(shifted, s, g);

    const double target = theta * std::pow(s.norm(), model.power() - 1.0);
    if (decrease > 0.0 && result.model_criticality <= target) {
      result.status = SubsolverStatus::Success;
      return result;
    }
    if (movement <= config.stall_tolerance * s.norm()) break;
  }

  result.status = SubsolverStatus::InnerBudgetExhausted;
  return result;
}

double step_norm_upper_bound(std::span<const double> derivative_norms, double r, double sigma) {
  const int p = static_cast<int>(derivative_norms.size());
  if (p < 1) throw std::invalid_argument("step_norm_upper_bound: need at least one norm");
  if (!(r > p)) throw std::invalid_argument("step_norm_upper_bound: r must exceed p");
  if (!(sigma > 0.0)) return std::numeric_limits<double>::infinity();
  double bound = 0.0;
  for (int j = 1; j <= p; ++j) {
    const double base = p * r * derivative_norms[static_cast<size_t>(j - 1)] /
                        (factorial(j) * sigma);
    bound = std::max(bound, std::pow(base, 1.0 / (r - j)));
  }
  return bound;
}

}  // namespace arp
