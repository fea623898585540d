#pragma once

#include "arp/geometry.hpp"
#include "arp/problem.hpp"
#include "arp/subsolver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace arp {

/// Order-independent initial regularization weight; sigma0 = kSigma0Bar / (p-1)!.
inline constexpr double kSigma0Bar = 1.0;
/// Order-independent inner tolerance factor; theta = kThetaBar / (p-1)!.
inline constexpr double kThetaBar = 100.0;

/// Parameters of the adaptive regularization method.
struct SolveConfig {
  int p = 2;
  double r = 3.0;
  double epsilon = 1e-6;
  double eta1 = 0.1;
  double eta2 = 0.9;
  double gamma1 = 2.0;
  double gamma2 = 5.0;
  double gamma3 = 0.5;
  double theta = kThetaBar;
  double sigma0 = kSigma0Bar;
  double sigma_min = 1e-8;
  double alpha = 0.1;
  std::int64_t max_outer_iterations = 100000;
  int max_consecutive_subsolver_failures = 50;
  SubsolverConfig subsolver;

  /// Defaults for order p, with theta and sigma0 scaled by 1/(p-1)!.
  static SolveConfig for_order(int p, double r, double epsilon);

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

enum class Classification { VerySuccessful, Successful, Unsuccessful };

const char* to_string(Classification c);
Classification parse_classification(const std::string& text);

inline bool is_successful(Classification c) { return c != Classification::Unsuccessful; }

enum class SolveStatus { ConvergedAtStart, Converged, IterationLimit, SubsolverFailureLimit };

const char* to_string(SolveStatus status);
SolveStatus parse_solve_status(const std::string& text);

inline bool converged(SolveStatus status) {
  return status == SolveStatus::Converged || status == SolveStatus::ConvergedAtStart;
}

struct IterationRecord {
  std::int64_t index = 0;
  double sigma = 0.0;
  /// x_k and s_k.
  Vector point;
  Vector step;
  double step_norm = 0.0;
  double f_value = 0.0;      // f(x_k)
  double trial_value = 0.0;  // f(x_k + s_k)
  double rho = 0.0;
  double pi_f_trial = 0.0;
  double pi_model = 0.0;
  /// f(x_k) - T_p(x_k, s_k).
  double model_decrease = 0.0;
  /// f(x_k) - m_k(x_k + s_k).
  double reg_model_decrease = 0.0;
  /// f(x_k) - f(x_k + s_k).
  double actual_decrease = 0.0;
  bool step_length_test = false;
  Classification classification = Classification::Unsuccessful;
  bool terminated_here = false;
  /// The inner solver did not produce an admissible step; no trial point was evaluated.
  bool subsolver_failed = false;
  int inner_iterations = 0;
  EvaluationCounters counters;
};

struct SolveReport {
  std::string problem;
  int dimension = 0;
  /// Declared Holder exponent of the order-p derivative (NaN if undeclared).
  double beta = 0.0;
  SolveConfig config;
  FeasibleSet set;
  Vector start;
  SolveStatus status = SolveStatus::IterationLimit;
  Vector final_point;
  double final_value = 0.0;
  double final_criticality = 0.0;
  std::vector<IterationRecord> iterations;
  EvaluationCounters counters;
  std::int64_t successful_count = 0;
  std::int64_t unsuccessful_count = 0;
  std::vector<std::string> warnings;
};

/// sigma ||s||^{r-1} >= alpha pi_f(x_k + s_k).
bool step_length_condition(double sigma, double step_norm, double pi_f_trial, double r,
                           double alpha);

Classification classify_iteration(double rho, bool step_length_ok, const SolveConfig& config);

/// Deterministic regularization update: the lower end of each admissible interval.
double update_sigma(double sigma, double rho, bool step_length_ok, const SolveConfig& config);

/// Runs the adaptive regularization method from `x0` until pi_f < epsilon or a limit is hit.
///
/// Derivatives of order 2..p are captured at the start and after every successful
/// iteration only; every iteration evaluates f and its gradient at the trial point.
SolveReport run(const Problem& problem, const ProblemMeta& meta, const FeasibleSet& set,
                const Vector& x0, const SolveConfig& config);

}  // namespace arp
