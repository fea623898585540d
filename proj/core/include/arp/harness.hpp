#pragma once

#include "arp/corpus.hpp"
#include "arp/driver.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace arp {

/// Position of the regularization power r relative to p + beta.
enum class Regime { AboveHolder, AtHolder, BelowHolder };

const char* to_string(Regime regime);

/// Relative tolerance used to decide r == p + beta.
inline constexpr double kRegimeTolerance = 1e-12;

Regime classify_regime(int p, double r, double beta);

/// Worst-case constants and the epsilon exponent of the evaluation bound.
struct TheoreticalBounds {
  int p = 1;
  double r = 2.0;
  double beta = 1.0;
  Regime regime = Regime::AboveHolder;
  /// Power of 1/epsilon in the dominant term.
  double exponent = 0.0;
  /// L_p = L / (p-1)!.
  double L_p = 0.0;
  double kappa2 = 0.0;
  std::optional<double> kappa1;
  std::optional<double> sigma_max;
  std::optional<double> sigma_up;
  std::optional<double> M;
  /// kappa_{s,p} when r >= p + beta, kappa_{s,r} otherwise.
  double kappa_s = 0.0;
  /// Coefficient of |log epsilon| in the total iteration bound.
  double log_term_coefficient = 0.0;

  /// Ceiling on sigma_k before termination at accuracy epsilon.
  double sigma_ceiling(double epsilon) const;

  /// Guaranteed decrease kappa_s * epsilon^exponent on successful iterations.
  double successful_decrease(double epsilon) const;
};

/// kappa2 = r L_p / (p (1 - eta2)).
double kappa2(int p, double r, double L_p, const SolveConfig& config);

/// Constants of the r >= p + beta analysis.
struct LargePowerConstants {
  double kappa1 = 0.0;
  double sigma_max = 0.0;
  double kappa_s = 0.0;
};
/// kappa1 = (3^{r-p-beta} kappa2^{r-1})^{1/(p+beta-1)}, sigma_max = max(sigma0, gamma2 theta,
/// gamma2 kappa1), kappa_s = (eta1/r)(alpha^r / sigma_max)^{1/(r-1)}. Requires r >= p + beta.
LargePowerConstants large_power_constants(int p, double r, double beta, double kappa2,
                                          const SolveConfig& config);

/// Constants of the r <= p + beta analysis.
struct SmallPowerConstants {
  std::optional<double> M;
  double sigma_up = 0.0;
  double kappa_s = 0.0;
};
/// sigma_up = max(sigma0, gamma2 theta, gamma2 kappa2 M^{p+beta-r}) and
/// kappa_s = (eta1/r)(alpha^r / sigma_up)^{1/(r-1)}, with
/// M = max_j (r p M_j / (j! sigma_min))^{1/(r-j)}. M is only needed (and only
/// computed) when r < p + beta; that case requires derivative bounds and sigma_min > 0.
SmallPowerConstants small_power_constants(int p, double r, double beta, double kappa2,
                                          const SolveConfig& config,
                                          const std::optional<std::vector<double>>& derivative_bounds);

/// Constants and exponent for (p, r, beta), using the parameters in `config`
/// and L = (p-1)! L_p. Throws std::invalid_argument on invalid (p, r, beta) or
/// when r < p + beta without derivative bounds or with sigma_min = 0.
TheoreticalBounds theoretical_bounds(int p, double r, double beta, double L_unscaled,
                                     const SolveConfig& config,
                                     const std::optional<std::vector<double>>& derivative_bounds = {});

/// Worst-case counts at accuracy epsilon for a start with f(x0) - f_low = gap.
struct ComplexityBound {
  double successful = 0.0;
  double total = 0.0;
};
ComplexityBound complexity_bound(const TheoreticalBounds& bounds, double gap, double epsilon,
                                 const SolveConfig& config);

/// Least-squares slope of log(y) against log(1/x). Needs >= 4 positive points.
double fit_slope(std::span<const double> xs, std::span<const double> ys);

/// Outcome of one trace invariant.
struct InvariantVerdict {
  std::string id;
  std::string description;
  bool passed = true;
  std::optional<std::int64_t> iteration;
  std::string detail;
};

/// Evaluates the trace invariants I1-I10 on a solve report.
std::vector<InvariantVerdict> check_trace(const SolveReport& report, const SolveConfig& config);

inline std::vector<InvariantVerdict> check_trace(const SolveReport& report) {
  return check_trace(report, report.config);
}

bool all_passed(const std::vector<InvariantVerdict>& verdicts);

/// Checks sigma_k <= sigma_ceiling(epsilon) and, on successful non-terminal iterations,
/// f(x_k) - f(x_{k+1}) >= kappa_s epsilon^exponent. Only meaningful when the
/// declared Holder constant holds along the whole path.
InvariantVerdict check_worst_case_decrease(const SolveReport& report,
                                           const TheoreticalBounds& bounds);

/// One complexity sweep over an epsilon grid.
struct SweepResult {
  std::string problem;
  int p = 1;
  double r = 2.0;
  double beta = 1.0;
  std::vector<double> epsilon_grid;
  /// Total iterations per epsilon (equal to the f and gradient evaluation counts minus one).
  std::vector<std::int64_t> total_evaluations;
  std::vector<std::int64_t> successful_counts;
  std::vector<std::int64_t> unsuccessful_counts;
  std::vector<std::int64_t> high_order_evaluations;
  std::vector<SolveReport> reports;
  /// Failing invariants per run (empty vectors when everything passed).
  std::vector<std::vector<InvariantVerdict>> failures;
  double fitted_slope = 0.0;
  std::optional<TheoreticalBounds> theoretical;
  bool all_converged = true;
  bool all_invariants_passed = true;

  bool slope_within(double tolerance) const {
    return theoretical && fitted_slope <= theoretical->exponent + tolerance;
  }
};

/// Slope tolerance accepted over the theoretical exponent.
inline constexpr double kSlopeTolerance = 0.3;

/// Runs the solver once per epsilon from the entry's default start and set,
/// checks every trace and fits the iteration-count slope. Runs execute on up to
/// `jobs` threads; results keep grid order. Throws std::invalid_argument if the
/// grid is not strictly decreasing within (0, 1] with at least 4 points or the
/// entry does not support order p.
SweepResult run_sweep(const CorpusEntry& entry, int p, double r, std::span<const double> epsilon_grid,
                      const SolveConfig& config, int jobs = 1);

/// Geometric grid start, start/ratio, ... (count values, ratio > 1).
std::vector<double> geometric_grid(double start, double ratio, int count);

/// `sweep.csv` content, one row per epsilon.
std::string sweep_csv(const SweepResult& result);

/// `sweep_summary.json` content.
std::string sweep_summary_json(const SweepResult& result);

}  // namespace arp
