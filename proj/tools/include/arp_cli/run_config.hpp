#pragma once

#include "arp/corpus.hpp"
#include "arp/driver.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arp::cli {

/// Raised for unreadable, malformed or invalid run configurations. The message
/// names the file, the line when one applies, and the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  double start = 1e-2;
  double ratio = 10.0;
  int count = 5;
  std::optional<std::vector<double>> grid;  // explicit list overrides start/ratio/count

  std::vector<double> epsilons() const;
};

struct RunConfig {
  CorpusEntry entry;
  FeasibleSet set;
  Vector start;
  SolveConfig solve;
  std::optional<SweepSpec> sweep;
  std::string output_directory;
};

/// Parses the INI-style run configuration:
///
///   [problem]    name, n, q
///   [set]        type = whole-space | box | ball | orthant; lower, upper, center, radius
///   [start]      point = default | x1 x2 ...
///   [algorithm]  p, r, epsilon, eta1, eta2, gamma1, gamma2, gamma3, theta, sigma0,
///                sigma_min, alpha, max_outer_iterations,
///                max_consecutive_subsolver_failures, scale_by_factorial,
///                sigma0_bar, theta_bar
///   [subsolver]  max_inner_iterations, armijo_constant, backtrack_factor,
///                initial_trial_steplength, stall_tolerance, trial_steplength
///   [sweep]      start, ratio, count, grid
///   [output]     directory
///
/// `source` is used in error messages and to resolve a relative output
/// directory (relative to the directory containing the file).
RunConfig parse_run_config(std::istream& in, const std::string& source);

RunConfig load_run_config(const std::string& path);

}  // namespace arp::cli
