#pragma once

#include "arp/geometry.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace arp {

/// Order-j derivative tensor of f frozen at a point, exposed only through its
/// contractions with a single direction.
class DerivativeTensor {
 public:
  virtual ~DerivativeTensor() = default;

  virtual int order() const = 0;

  /// The vector D[s]^{j-1}.
  virtual Vector contract(const Vector& s) const = 0;

  /// The scalar D[s]^j. Implementations compute this directly rather than
  /// through contract(), so the two can be checked against each other.
  virtual double contract_full(const Vector& s) const = 0;
};

using DerivativeTensorPtr = std::shared_ptr<const DerivativeTensor>;

/// Evaluation contract for a smooth objective f : R^n -> R.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string name() const = 0;
  virtual int dimension() const = 0;

  /// Highest derivative order this problem can supply.
  virtual int max_order() const = 0;

  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;

  /// Derivative of order 2 <= order <= max_order() at `x`.
  /// Throws std::out_of_range for unsupported orders.
  virtual DerivativeTensorPtr derivative(int order, const Vector& x) const = 0;

  /// grad^j f(x)[s]^{j-1}; order 1 is the gradient.
  Vector contraction_vector(int order, const Vector& x, const Vector& s) const;

  /// grad^j f(x)[s]^j; order 1 is <grad f(x), s>.
  double contraction_scalar(int order, const Vector& x, const Vector& s) const;

 protected:
  /// Throws std::out_of_range unless 2 <= order <= max_order().
  void require_order(int order) const;
};

/// Smoothness of the order-p derivative: ||D^p f(x) - D^p f(y)|| <= L ||x - y||^beta,
/// where L = (p-1)! L_p is the unscaled constant.
struct OrderSmoothness {
  int order = 1;
  double beta = 1.0;
  double holder_constant_unscaled = 0.0;
  /// True when the constant holds on all of R^n (or on the whole feasible set),
  /// not only on a region around the default start.
  bool certified = false;
};

/// Declared analytic properties of a problem.
struct ProblemMeta {
  /// One entry per order 1..max_order, in order.
  std::vector<OrderSmoothness> smoothness;
  double f_low = 0.0;
  /// Bounds M_j on ||D^j f|| over the level set of the default start, j = 1..max_order.
  std::optional<std::vector<double>> derivative_bounds;
  std::optional<Vector> known_minimizer;

  /// Smoothness record for order `p`; throws std::out_of_range if not declared.
  const OrderSmoothness& at(int p) const;

  /// Throws std::invalid_argument on p = 1 with beta = 0, beta outside [0, 1],
  /// or negative constants.
  void validate() const;
};

/// Per-order evaluation counts: index 0 is f, 1 the gradient, j >= 2 derivative captures.
struct EvaluationCounters {
  std::vector<std::int64_t> by_order;

  explicit EvaluationCounters(int max_order = 1) : by_order(static_cast<size_t>(max_order) + 1, 0) {}

  std::int64_t values() const { return by_order.at(0); }
  std::int64_t gradients() const { return by_order.at(1); }
  std::int64_t order(int j) const { return j < static_cast<int>(by_order.size()) ? by_order[j] : 0; }
  friend bool operator==(const EvaluationCounters&, const EvaluationCounters&) = default;
};

/// Forwards to a Problem and counts every evaluation. One per solve.
class CountedProblem {
 public:
  explicit CountedProblem(const Problem& problem)
      : problem_(problem), counters_(problem.max_order()) {}

  const Problem& problem() const { return problem_; }
  const EvaluationCounters& counters() const { return counters_; }

  double value(const Vector& x);
  Vector gradient(const Vector& x);
  DerivativeTensorPtr derivative(int order, const Vector& x);

 private:
  const Problem& problem_;
  EvaluationCounters counters_;
};

}  // namespace arp
