#pragma once

#include "arp/geometry.hpp"
#include "arp/model.hpp"

#include <functional>
#include <span>

namespace arp {

/// How the first trial steplength of each inner iteration is chosen.
enum class TrialSteplength {
  /// Last accepted steplength, enlarged once by 1/backtrack_factor.
  WarmStart,
  /// Barzilai-Borwein ratio <ds, ds>/<ds, dg>, falling back to WarmStart when
  /// the curvature estimate is not positive.
  BarzilaiBorwein,
};

struct SubsolverConfig {
  int max_inner_iterations = 10000;
  double armijo_constant = 1e-4;
  double backtrack_factor = 0.5;
  double initial_trial_steplength = 1.0;
  /// An accepted inner step that moves the iterate by less than this fraction
  /// of its norm counts as a stall.
  double stall_tolerance = 1e-14;
  TrialSteplength trial_steplength = TrialSteplength::BarzilaiBorwein;
  /// Called after every accepted inner step with the iteration number, the
  /// step and f(x_k) - m_k(x_k + s). Diagnostics only.
  std::function<void(int, const Vector&, double)> on_accept;

  void validate() const;
};

enum class SubsolverStatus {
  Success,
  /// The model gradient at s = 0 is already critical; the outer loop should have stopped.
  ModelCritical,
  /// The step conditions were not met within the inner budget or the inner method stalled.
  InnerBudgetExhausted,
};

const char* to_string(SubsolverStatus status);

struct SubsolverResult {
  SubsolverStatus status = SubsolverStatus::Success;
  /// The returned step on success, otherwise the best inner iterate.
  Vector step;
  double model_value = 0.0;
  /// f(x_k) - m_k(x_k + step).
  double model_decrease = 0.0;
  double model_criticality = 0.0;
  int inner_iterations = 0;

  bool ok() const { return status == SubsolverStatus::Success; }
};

/// Step acceptance test of the inner solver, evaluated at one step.
struct StepConditions {
  bool feasible = false;
  double model_decrease = 0.0;
  double model_criticality = 0.0;
  double criticality_target = 0.0;

  bool strict_decrease() const { return model_decrease > 0.0; }
  bool stationary_enough() const { return model_criticality <= criticality_target; }
  bool satisfied() const { return feasible && strict_decrease() && stationary_enough(); }
};

/// Evaluates feasibility of x_k + s, strict model decrease m_k(x_k+s) < f(x_k)
/// and pi_{m_k}(x_k + s) <= theta ||s||^{r-1}.
StepConditions evaluate_step_conditions(const RegularizedModel& model, const FeasibleSet& set,
                                        const Vector& x_k, const Vector& s, double theta);

/// Approximately minimizes s -> m_k(x_k + s) over x_k + s in `set` by projected
/// gradient with Armijo backtracking along the projection arc, starting at s = 0
/// and stopping at the first iterate that satisfies evaluate_step_conditions().
SubsolverResult solve_subproblem(const RegularizedModel& model, const FeasibleSet& set,
                                 const Vector& x_k, double theta, const SubsolverConfig& config);

/// Upper bound on the norm of any step with strict model decrease:
///   max_j (p r N_j / (j! sigma))^{1/(r-j)},
/// where `derivative_norms[j-1]` bounds ||D^j f(x_k)|| for j = 1..p.
double step_norm_upper_bound(std::span<const double> derivative_norms, double r, double sigma);

}  // namespace arp
