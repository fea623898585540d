#include "arp/harness.hpp"

#include "arp/model.hpp"
#include "arp/trace_io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace arp {

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::AboveHolder: return "AboveHolder";
    case Regime::AtHolder: return "AtHolder";
    case Regime::BelowHolder: return "BelowHolder";
  }
  return "?";
}

Regime classify_regime(int p, double r, double beta) {
  const double boundary = p + beta;
  if (std::abs(r - boundary) <= kRegimeTolerance * std::max(1.0, boundary)) return Regime::AtHolder;
  return r > boundary ? Regime::AboveHolder : Regime::BelowHolder;
}

double TheoreticalBounds::sigma_ceiling(double epsilon) const {
  if (regime == Regime::AboveHolder) {
    return *sigma_max * std::pow(epsilon, (p + beta - r) / (p + beta - 1.0));
  }
  return *sigma_up;
}

double TheoreticalBounds::successful_decrease(double epsilon) const {
  return kappa_s * std::pow(epsilon, exponent);
}

double kappa2(int p, double r, double L_p, const SolveConfig& config) {
  return r * L_p / (p * (1.0 - config.eta2));
}

LargePowerConstants large_power_constants(int p, double r, double beta, double kappa2,
                                          const SolveConfig& config) {
  if (classify_regime(p, r, beta) == Regime::BelowHolder) {
    throw std::invalid_argument("large_power_constants requires r >= p + beta");
  }
  // At r = p + beta the 3^{r-p-beta} factor is exactly 1.
  const double gap = classify_regime(p, r, beta) == Regime::AtHolder ? 0.0 : r - p - beta;
  LargePowerConstants c;
  c.kappa1 = std::pow(std::pow(3.0, gap) * std::pow(kappa2, r - 1.0), 1.0 / (p + beta - 1.0));
  c.sigma_max = std::max({config.sigma0, config.gamma2 * config.theta, config.gamma2 * c.kappa1});
  c.kappa_s = config.eta1 / r * std::pow(std::pow(config.alpha, r) / c.sigma_max, 1.0 / (r - 1.0));
  return c;
}

SmallPowerConstants small_power_constants(int p, double r, double beta, double kappa2,
                                          const SolveConfig& config,
                                          const std::optional<std::vector<double>>& derivative_bounds) {
  const Regime regime = classify_regime(p, r, beta);
  if (regime == Regime::AboveHolder) {
    throw std::invalid_argument("small_power_constants requires r <= p + beta");
  }
  SmallPowerConstants c;
  double scale = 1.0;  // M^{p+beta-r}, identically 1 at r = p + beta
  if (regime == Regime::BelowHolder) {
    if (!derivative_bounds || static_cast<int>(derivative_bounds->size()) < p) {
      throw std::invalid_argument(
          "r < p + beta requires derivative bounds M_1..M_p on the iterates");
    }
    if (!(config.sigma_min > 0.0)) {
      throw std::invalid_argument("r < p + beta requires sigma_min > 0");
    }
    double M = 0.0;
    for (int j = 1; j <= p; ++j) {
      const double base = r * p * (*derivative_bounds)[static_cast<size_t>(j - 1)] /
                          (factorial(j) * config.sigma_min);
      M = std::max(M, std::pow(base, 1.0 / (r - j)));
    }
    c.M = M;
    scale = std::pow(M, p + beta - r);
  }
  c.sigma_up = std::max({config.sigma0, config.gamma2 * config.theta, config.gamma2 * kappa2 * scale});
  c.kappa_s = config.eta1 / r * std::pow(std::pow(config.alpha, r) / c.sigma_up, 1.0 / (r - 1.0));
  return c;
}

TheoreticalBounds theoretical_bounds(int p, double r, double beta, double L_unscaled,
                                     const SolveConfig& config,
                                     const std::optional<std::vector<double>>& derivative_bounds) {
  if (p < 1) throw std::invalid_argument("theoretical_bounds: p must be >= 1");
  if (!(r > p)) throw std::invalid_argument("theoretical_bounds: r must exceed p");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("theoretical_bounds: beta must lie in [0, 1]");
  if (p == 1 && !(beta > 0.0)) throw std::invalid_argument("theoretical_bounds: p = 1 requires beta > 0");
  if (!(L_unscaled >= 0.0)) throw std::invalid_argument("theoretical_bounds: L must be nonnegative");

  TheoreticalBounds b;
  b.p = p;
  b.r = r;
  b.beta = beta;
  b.regime = classify_regime(p, r, beta);
  b.L_p = L_unscaled / factorial(p - 1);
  b.kappa2 = kappa2(p, r, b.L_p, config);

  if (b.regime != Regime::BelowHolder) {
    const auto large = large_power_constants(p, r, beta, b.kappa2, config);
    b.kappa1 = large.kappa1;
    b.sigma_max = large.sigma_max;
    b.kappa_s = large.kappa_s;
    b.exponent = (p + beta) / (p + beta - 1.0);
    b.log_term_coefficient = b.regime == Regime::AtHolder
                                 ? 0.0
                                 : (r - p - beta) / ((p + beta - 1.0) * std::log(config.gamma1));
    if (b.regime == Regime::AtHolder) {
      b.sigma_up = small_power_constants(p, r, beta, b.kappa2, config, derivative_bounds).sigma_up;
    }
  } else {
    const auto small = small_power_constants(p, r, beta, b.kappa2, config, derivative_bounds);
    b.M = small.M;
    b.sigma_up = small.sigma_up;
    b.kappa_s = small.kappa_s;
    b.exponent = r / (r - 1.0);
    b.log_term_coefficient = 0.0;
  }
  return b;
}

ComplexityBound complexity_bound(const TheoreticalBounds& bounds, double gap, double epsilon,
                                 const SolveConfig& config) {
  ComplexityBound out;
  const double leading = gap / bounds.kappa_s * std::pow(epsilon, -bounds.exponent);
  const double log_g1 = std::log(config.gamma1);
  const double sigma_ref = bounds.regime == Regime::BelowHolder ? *bounds.sigma_up : *bounds.sigma_max;
  out.successful = std::floor(leading);
  out.total = std::floor(leading * (1.0 + std::abs(std::log(config.gamma3)) / log_g1) +
                         bounds.log_term_coefficient * std::abs(std::log(epsilon)) +
                         std::log(sigma_ref / config.sigma0) / log_g1);
  return out;
}

double fit_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_slope: xs and ys differ in length");
  if (xs.size() < 4) throw std::invalid_argument("fit_slope: at least 4 points are required");
  double sx = 0, sy = 0;
  const double n = static_cast<double>(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::invalid_argument("fit_slope: data must be positive");
    sx += -std::log(xs[i]);
    sy += std::log(ys[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double dx = -std::log(xs[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(ys[i]) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: xs must not all be equal");
  return sxy / sxx;
}

// ---------------------------------------------------------------------------
// Trace invariants

namespace {

constexpr double kRelTol = 1e-10;

bool geq_rel(double lhs, double rhs) {
  return lhs >= rhs - kRelTol * std::max(std::abs(lhs), std::abs(rhs));
}

class VerdictBuilder {
 public:
  VerdictBuilder(std::string id, std::string description) {
    v_.id = std::move(id);
    v_.description = std::move(description);
  }
  template <typename... Args>
  void fail(std::optional<std::int64_t> k, fmt::format_string<Args...> f, Args&&... args) {
    if (!v_.passed) return;  // keep the first violation
    v_.passed = false;
    v_.iteration = k;
    v_.detail = fmt::format(f, std::forward<Args>(args)...);
  }
  InvariantVerdict done() { return std::move(v_); }

 private:
  InvariantVerdict v_;
};

}  // namespace

bool all_passed(const std::vector<InvariantVerdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.passed; });
}

std::vector<InvariantVerdict> check_trace(const SolveReport& report, const SolveConfig& config) {
  const auto& its = report.iterations;
  const double r = config.r;
  std::vector<InvariantVerdict> out;

  {
    VerdictBuilder v("I1", "iterates and trial points are feasible");
    for (const auto& rec : its) {
      if (!report.set.contains(rec.point)) v.fail(rec.index, "x_k is infeasible");
      if (!report.set.contains(rec.point + rec.step)) v.fail(rec.index, "x_k + s_k is infeasible");
    }
    if (report.final_point.size() > 0 && !report.set.contains(report.final_point)) {
      v.fail(std::nullopt, "final point is infeasible");
    }
    out.push_back(v.done());
  }
  {
    VerdictBuilder v("I2", "objective is monotone and strictly decreases on successful steps");
    for (size_t i = 0; i < its.size(); ++i) {
      const auto& rec = its[i];
      const bool success = !rec.subsolver_failed && is_successful(rec.classification);
      if (success && !(rec.trial_value < rec.f_value)) {
        v.fail(rec.index, "successful step with f(x_k + s_k) = {:.17g} >= f(x_k) = {:.17g}",
               rec.trial_value, rec.f_value);
      }
      if (i + 1 == its.size()) break;
      const auto& next = its[i + 1];
      const Vector expected = success ? Vector(rec.point + rec.step) : rec.point;
      const double expected_f = success ? rec.trial_value : rec.f_value;
      if (next.f_value != expected_f || next.point != expected) {
        v.fail(next.index, "incumbent does not follow the acceptance decision of iteration {}", rec.index);
      }
    }
    out.push_back(v.done());
  }
  {
    VerdictBuilder v("I3", "Taylor decrease is at least (sigma/r)||s||^r");
    for (const auto& rec : its) {
      if (rec.subsolver_failed) continue;
      const double reg = rec.sigma / r * std::pow(rec.step_norm, r);
      if (!geq_rel(rec.model_decrease, reg)) {
        v.fail(rec.index, "f - T_p = {:.6e} < (sigma/r)||s||^r = {:.6e}", rec.model_decrease, reg);
      }
    }
    out.push_back(v.done());
  }
  {
    VerdictBuilder v("I4", "step satisfies strict model decrease and the model criticality test");
    for (const auto& rec : its) {
      if (rec.subsolver_failed) continue;
      const double target = config.theta * std::pow(rec.step_norm, r - 1.0);
      if (!(rec.pi_model <= target)) {
        v.fail(rec.index, "pi_m = {:.6e} > theta ||s||^(r-1) = {:.6e}", rec.pi_model, target);
      }
      if (!(rec.reg_model_decrease > 0.0)) {
        v.fail(rec.index, "m_k(x_k + s_k) >= f(x_k) (decrease {:.6e})", rec.reg_model_decrease);
      }
    }
    out.push_back(v.done());
  }
  {
    VerdictBuilder v("I5", "classification matches rho and the step-length test");
    for (const auto& rec : its) {
      if (!rec.subsolver_failed) {
        const double rho = rec.actual_decrease / rec.model_decrease;
        if (!(std::abs(rho - rec.rho) <= kRelTol * std::max(1.0, std::abs(rho)))) {
          v.fail(rec.index, "stored rho = {:.17g} but (f - f_trial)/(f - T_p) = {:.17g}", rec.rho, rho);
        }
      }
      const Classification expected = rec.subsolver_failed
                                          ? Classification::Unsuccessful
                                          : classify_iteration(rec.rho, rec.step_length_test, config);
      if (rec.classification != expected) {
        v.fail(rec.index, "recorded {} but rho = {:.6g}, step test {} gives {}",
               to_string(rec.classification), rec.rho, rec.step_length_test, to_string(expected));
      }
    }
    out.push_back(v.done());
  }
  {
    VerdictBuilder v("I6", "sigma stays above sigma_min and follows the update rule");
    if (!its.empty() && its.front().sigma != config.sigma0) {
      v.fail(its.front().index, "sigma_0 = {:.17g} differs from the configured {:.17g}",
             its.front().sigma, config.sigma0);
    }
    for (size_t i = 0; i < its.size(); ++i) {
      const auto& rec = its[i];
      if (!(rec.sigma >= config.sigma_min)) v.fail(rec.index, "sigma = {:.6e} < sigma_min", rec.sigma);
      if (i + 1 == its.size()) break;
      const double expected = rec.subsolver_failed
                                  ? config.gamma1 * rec.sigma
                                  : update_sigma(rec.sigma, rec.rho, rec.step_length_test, config);
      if (its[i + 1].sigma != expected) {
        v.fail(its[i + 1].index, "sigma = {:.17g}, update rule gives {:.17g}", its[i + 1].sigma, expected);
      }
    }
    out.push_back(v.done());
  }
  {
    VerdictBuilder v("I7", "successful iterations decrease f by the guaranteed amounts");
    for (const auto& rec : its) {
      if (rec.subsolver_failed || !is_successful(rec.classification)) continue;
      const double taylor = config.eta1 * rec.model_decrease;
      if (!geq_rel(rec.actual_decrease, taylor)) {
        v.fail(rec.index, "f decrease {:.6e} < eta1 (f - T_p) = {:.6e}", rec.actual_decrease, taylor);
      }
      const double first = config.eta1 * rec.sigma / r * std::pow(rec.step_norm, r);
      if (!geq_rel(rec.actual_decrease, first)) {
        v.fail(rec.index, "f decrease {:.6e} < eta1 (sigma/r)||s||^r = {:.6e}", rec.actual_decrease, first);
      }
      if (!rec.terminated_here) {
        const double second = config.eta1 / r * config.alpha * config.epsilon * rec.step_norm;
        if (!geq_rel(rec.actual_decrease, second)) {
          v.fail(rec.index, "f decrease {:.6e} < (eta1/r) alpha eps ||s|| = {:.6e}", rec.actual_decrease,
                 second);
        }
      }
    }
    out.push_back(v.done());
  }
  {
    VerdictBuilder v("I8", "unsuccessful iterations are bounded by successful ones");
    double sigma_up = config.sigma0;
    for (const auto& rec : its) sigma_up = std::max(sigma_up, rec.sigma);
    const double log_g1 = std::log(config.gamma1);
    const double ratio = std::abs(std::log(config.gamma3)) / log_g1;
    const double offset = std::log(sigma_up / config.sigma0) / log_g1 + 1.0;
    std::int64_t successes = 0, failures = 0;
    for (const auto& rec : its) {
      if (!rec.subsolver_failed && is_successful(rec.classification)) {
        ++successes;
      } else {
        ++failures;
      }
      const double bound = ratio * static_cast<double>(successes) + offset;
      if (static_cast<double>(failures) > bound) {
        v.fail(rec.index, "|U_j| = {} exceeds {:.6g}", failures, bound);
      }
    }
    out.push_back(v.done());
  }
  {
    VerdictBuilder v("I9", "stored step-length test matches sigma ||s||^(r-1) >= alpha pi_f");
    for (const auto& rec : its) {
      if (rec.step_norm != rec.step.norm()) v.fail(rec.index, "step_norm differs from ||s||");
      if (rec.subsolver_failed) continue;
      const bool expected = step_length_condition(rec.sigma, rec.step_norm, rec.pi_f_trial, r, config.alpha);
      if (expected != rec.step_length_test) {
        v.fail(rec.index, "stored {} but recomputed {}", rec.step_length_test, expected);
      }
    }
    out.push_back(v.done());
  }
  {
    VerdictBuilder v("I10", "evaluation counters match the iteration structure");
    std::int64_t evaluated = 1;  // f and gradient at x0
    std::int64_t captures = 0;
    bool capture_pending = true;
    for (const auto& rec : its) {
      if (capture_pending) {
        ++captures;
        capture_pending = false;
      }
      if (!rec.subsolver_failed) ++evaluated;
      if (rec.counters.values() != evaluated || rec.counters.gradients() != evaluated) {
        v.fail(rec.index, "counters f = {}, grad = {}, expected {}", rec.counters.values(),
               rec.counters.gradients(), evaluated);
      }
      for (int j = 2; j < static_cast<int>(rec.counters.by_order.size()); ++j) {
        const std::int64_t expected = j <= config.p ? captures : 0;
        if (rec.counters.order(j) != expected) {
          v.fail(rec.index, "order-{} counter {} expected {}", j, rec.counters.order(j), expected);
        }
      }
      if (!rec.subsolver_failed && is_successful(rec.classification)) capture_pending = true;
    }
    const auto& c = report.counters;
    if (c.values() != evaluated || c.gradients() != evaluated) {
      v.fail(std::nullopt, "final counters f = {}, grad = {}, expected {}", c.values(), c.gradients(), evaluated);
    }
    for (int j = 2; j < static_cast<int>(c.by_order.size()); ++j) {
      const std::int64_t expected = j <= config.p ? captures : 0;
      if (c.order(j) != expected) v.fail(std::nullopt, "final order-{} counter {} expected {}", j, c.order(j), expected);
    }
    out.push_back(v.done());
  }
  {
    VerdictBuilder v("R", "report summary is consistent with the trace");
    std::int64_t s = 0;
    for (const auto& rec : its) s += (!rec.subsolver_failed && is_successful(rec.classification)) ? 1 : 0;
    if (report.successful_count != s ||
        report.successful_count + report.unsuccessful_count != static_cast<std::int64_t>(its.size())) {
      v.fail(std::nullopt, "successful/unsuccessful counts {} / {} do not match {} iterations",
             report.successful_count, report.unsuccessful_count, its.size());
    }
    if (converged(report.status) && !(report.final_criticality < config.epsilon)) {
      v.fail(std::nullopt, "converged with final criticality {:.6e} >= epsilon", report.final_criticality);
    }
    for (size_t i = 0; i < its.size(); ++i) {
      const bool last = i + 1 == its.size();
      const bool should = last && report.status == SolveStatus::Converged;
      if (its[i].terminated_here != should) {
        v.fail(its[i].index, "termination flag inconsistent with status {}", to_string(report.status));
      }
    }
    if (report.status == SolveStatus::ConvergedAtStart && !its.empty()) {
      v.fail(std::nullopt, "ConvergedAtStart with {} iterations", its.size());
    }
    out.push_back(v.done());
  }
  return out;
}

InvariantVerdict check_worst_case_decrease(const SolveReport& report, const TheoreticalBounds& bounds) {
  const double eps = report.config.epsilon;
  VerdictBuilder v("WC", "sigma and successful decreases respect the worst-case constants");
  const double ceiling = bounds.sigma_ceiling(eps);
  const double decrease = bounds.successful_decrease(eps);
  for (const auto& rec : report.iterations) {
    if (rec.sigma > ceiling * (1.0 + kRelTol)) {
      v.fail(rec.index, "sigma = {:.6e} exceeds the ceiling {:.6e}", rec.sigma, ceiling);
    }
    if (rec.subsolver_failed || rec.terminated_here || !is_successful(rec.classification)) continue;
    if (!geq_rel(rec.actual_decrease, decrease)) {
      v.fail(rec.index, "decrease {:.6e} < kappa_s eps^{:.4g} = {:.6e}", rec.actual_decrease,
             bounds.exponent, decrease);
    }
  }
  return v.done();
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<double> geometric_grid(double start, double ratio, int count) {
  if (!(start > 0.0) || !(ratio > 1.0) || count < 1) {
    throw std::invalid_argument("geometric_grid: need start > 0, ratio > 1, count >= 1");
  }
  std::vector<double> grid;
  for (int i = 0; i < count; ++i) grid.push_back(start / std::pow(ratio, i));
  return grid;
}

SweepResult run_sweep(const CorpusEntry& entry, int p, double r, std::span<const double> epsilon_grid,
                      const SolveConfig& config, int jobs) {
  if (epsilon_grid.size() < 4) throw std::invalid_argument("sweep grid needs at least 4 points");
  for (size_t i = 0; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > 0.0 && epsilon_grid[i] <= 1.0)) {
      throw std::invalid_argument("sweep grid values must lie in (0, 1]");
    }
    if (i > 0 && !(epsilon_grid[i] < epsilon_grid[i - 1])) {
      throw std::invalid_argument("sweep grid must be strictly decreasing");
    }
  }
  if (!entry.supports(p)) {
    throw std::invalid_argument(fmt::format("{} does not support order {}", entry.name, p));
  }

  SweepResult result;
  result.problem = entry.name;
  result.p = p;
  result.r = r;
  result.beta = entry.meta.at(p).beta;
  result.epsilon_grid.assign(epsilon_grid.begin(), epsilon_grid.end());
  const size_t m = epsilon_grid.size();
  result.reports.resize(m);
  result.failures.resize(m);

  SolveConfig base = config;
  base.p = p;
  base.r = r;
  std::vector<std::exception_ptr> errors(m);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < m; i = next++) {
      try {
        SolveConfig c = base;
        c.epsilon = epsilon_grid[i];
        result.reports[i] = run(*entry.problem, entry.meta, entry.default_set, entry.default_start, c);
        for (auto& verdict : check_trace(result.reports[i], c)) {
          if (!verdict.passed) result.failures[i].push_back(std::move(verdict));
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(m));
  std::vector<std::jthread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<double> counts;
  for (size_t i = 0; i < m; ++i) {
    const auto& rep = result.reports[i];
    result.total_evaluations.push_back(static_cast<std::int64_t>(rep.iterations.size()));
    result.successful_counts.push_back(rep.successful_count);
    result.unsuccessful_counts.push_back(rep.unsuccessful_count);
    result.high_order_evaluations.push_back(high_order_evaluations(rep));
    result.all_converged = result.all_converged && rep.status == SolveStatus::Converged;
    result.all_invariants_passed = result.all_invariants_passed && result.failures[i].empty();
    counts.push_back(static_cast<double>(rep.iterations.size()));
  }
  result.fitted_slope = result.all_converged ? fit_slope(result.epsilon_grid, counts)
                                             : std::numeric_limits<double>::quiet_NaN();
  const auto& smooth = entry.meta.at(p);
  try {
    result.theoretical =
        theoretical_bounds(p, r, smooth.beta, smooth.holder_constant_unscaled, base, entry.meta.derivative_bounds);
  } catch (const std::invalid_argument&) {
    result.theoretical.reset();
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out =
      "epsilon,iterations,successful,unsuccessful,evals_value,evals_gradient,evals_high_order,"
      "final_criticality\n";
  for (size_t i = 0; i < result.epsilon_grid.size(); ++i) {
    const auto& rep = result.reports[i];
    out += fmt::format("{:.6g},{},{},{},{},{},{},{:.6g}\n", result.epsilon_grid[i],
                       result.total_evaluations[i], result.successful_counts[i],
                       result.unsuccessful_counts[i], rep.counters.values(), rep.counters.gradients(),
                       result.high_order_evaluations[i], rep.final_criticality);
  }
  return out;
}

std::string sweep_summary_json(const SweepResult& result) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["problem"] = result.problem;
  j["p"] = result.p;
  j["r"] = result.r;
  j["beta"] = result.beta;
  j["epsilon_grid"] = result.epsilon_grid;
  j["iterations"] = result.total_evaluations;
  j["fitted_slope"] = std::isfinite(result.fitted_slope) ? json(result.fitted_slope) : json(nullptr);
  j["slope_tolerance"] = kSlopeTolerance;
  j["all_converged"] = result.all_converged;
  j["all_invariants_passed"] = result.all_invariants_passed;
  if (result.theoretical) {
    const auto& t = *result.theoretical;
    j["regime"] = to_string(t.regime);
    j["theoretical_exponent"] = t.exponent;
    j["constants"] = {{"L_p", t.L_p},
                      {"kappa2", t.kappa2},
                      {"kappa1", opt(t.kappa1)},
                      {"sigma_max", opt(t.sigma_max)},
                      {"sigma_up", opt(t.sigma_up)},
                      {"M", opt(t.M)},
                      {"kappa_s", t.kappa_s},
                      {"log_term_coefficient", t.log_term_coefficient}};
    j["slope_within_bound"] = result.slope_within(kSlopeTolerance);
  } else {
    j["regime"] = nullptr;
    j["theoretical_exponent"] = nullptr;
    j["slope_within_bound"] = nullptr;
  }
  json failures = json::array();
  for (size_t i = 0; i < result.failures.size(); ++i) {
    for (const auto& f : result.failures[i]) {
      failures.push_back({{"epsilon", result.epsilon_grid[i]},
                          {"invariant", f.id},
                          {"iteration", f.iteration ? json(*f.iteration) : json(nullptr)},
                          {"detail", f.detail}});
    }
  }
  j["invariant_failures"] = failures;
  j["pass"] = result.all_converged && result.all_invariants_passed && result.slope_within(kSlopeTolerance);
  return j.dump(2) + "\n";
}

}  // namespace arp
