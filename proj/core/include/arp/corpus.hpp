#pragma once

#include "arp/geometry.hpp"
#include "arp/problem.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace arp {

/// A test problem with its declared smoothness, default start and default set.
struct CorpusEntry {
  std::string name;
  /// Family identifier: quadratic, rosenbrock, holder-power, shifted-holder, quartic-valley.
  std::string family;
  std::shared_ptr<const Problem> problem;
  ProblemMeta meta;
  Vector default_start;
  FeasibleSet default_set;

  int supported_orders() const { return problem->max_order(); }
  int dimension() const { return problem->dimension(); }
  bool supports(int p) const { return p >= 1 && p <= supported_orders(); }
  /// Highest declared order and its smoothness (the row shown in listings).
  const OrderSmoothness& top_smoothness() const { return meta.smoothness.back(); }
};

/// f(x) = 1/2 x'Ax + b'x with A symmetric positive definite.
CorpusEntry make_quadratic(const Eigen::MatrixXd& A, const Vector& b, Vector start);

/// Default quadratic: tridiagonal A (4 on the diagonal, 1 off it), alternating b.
CorpusEntry make_quadratic(int n = 4);

/// Chained Rosenbrock sum_i 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2, n >= 2.
CorpusEntry make_rosenbrock(int n = 2);

/// f(x) = sum_i |x_i|^q / q, q > 1.
CorpusEntry make_holder_power(double q, int n = 2);

/// f(x) = sum_i (|x_i|^q / q + 1 - cos x_i), q > 1. The constant shift makes f_low = 0.
CorpusEntry make_shifted_holder(double q, int n = 2);

/// f(x) = sum_i (x_i^2 - 1)^2 + (coupling/2) sum_i (x_{i+1} - x_i)^2.
CorpusEntry make_quartic_valley(int n = 3, double coupling = 1.0);

/// Highest order exposed by the Holder-power families for exponent q:
/// ceil(q) - 1 for non-integer q, capped at 4.
int holder_power_max_order(double q);

/// The default catalog.
std::vector<CorpusEntry> list_corpus();

/// Builds an entry from a catalog name such as "rosenbrock-4", "holder-power(2.5)",
/// "shifted-holder(1.5)", "quadratic" or "quartic-valley". A positive `n`
/// overrides the default dimension. Throws std::invalid_argument for unknown names.
CorpusEntry make_entry(const std::string& name, int n = 0);

/// Thrown when sampled derivative differences are all negligible.
class DegenerateSamplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Estimates b in ||D(x) - D(y)|| ~ C ||x - y||^b, with D the order-`order`
/// derivative contracted with a fixed random unit direction (the gradient for
/// order 1). Pairs are sampled at log-uniform separations around centers whose
/// coordinates are log-uniformly close to the middle of `region`; the largest
/// difference in each separation band is fitted by least squares in log-log space.
double empirical_holder_exponent(const Problem& problem, int order, const FeasibleSet::Box& region,
                                 int samples, std::uint64_t seed = 20240601);

}  // namespace arp
