#pragma once

#include "arp/problem.hpp"

#include <vector>

namespace arp {

/// Order-p Taylor polynomial of f around a base point x_k:
///   T_p(x_k, s) = f(x_k) + sum_{j=1..p} (1/j!) D^j f(x_k)[s]^j.
///
/// Derivatives of order 2..p are captured once at construction and shared by
/// every evaluation, so evaluating the model never touches the problem again.
class TaylorModel {
 public:
  /// `higher[i]` must be the order-(i+2) derivative at `base_point`.
  TaylorModel(Vector base_point, double base_value, Vector gradient_at_base, int order,
              std::vector<DerivativeTensorPtr> higher);

  /// Captures derivatives of order 2..order at `x` through `problem` (one count each).
  static TaylorModel capture(CountedProblem& problem, const Vector& x, double fx,
                             const Vector& gx, int order);

  int order() const { return order_; }
  int dimension() const { return static_cast<int>(base_point_.size()); }
  const Vector& base_point() const { return base_point_; }
  double base_value() const { return base_value_; }
  const Vector& gradient_at_base() const { return gradient_; }

  double value(const Vector& s) const { return base_value_ - decrease(s); }

  /// f(x_k) - T_p(x_k, s), summed term by term so it keeps full relative
  /// accuracy when it is small compared with f(x_k).
  double decrease(const Vector& s) const;

  /// grad_s T_p(x_k, s) = grad f(x_k) + sum_{j=2..p} (1/(j-1)!) D^j f(x_k)[s]^{j-1}.
  Vector gradient(const Vector& s) const;

  /// T_p(x_k, s + d) - T_p(x_k, s), integrated from the model gradient along
  /// the segment with a Gauss-Legendre rule that is exact for the polynomial.
  /// Accurate relative to the change itself even when both values agree to
  /// many digits, which differencing value() is not.
  double change(const Vector& s, const Vector& d) const;

  /// ||D^j f(x_k)[u]^{j-1}|| for u = s/||s||: a lower estimate of the tensor norm.
  double directional_norm(int j, const Vector& s) const;

 private:
  void check(const Vector& s) const;

  Vector base_point_;
  double base_value_;
  Vector gradient_;
  int order_;
  std::vector<DerivativeTensorPtr> higher_;
};

/// m_k(x_k + s) = T_p(x_k, s) + (sigma/r) ||s||^r with real r > p.
class RegularizedModel {
 public:
  RegularizedModel(TaylorModel taylor, double sigma, double power);

  const TaylorModel& taylor() const { return taylor_; }
  double sigma() const { return sigma_; }
  double power() const { return power_; }

  double value(const Vector& s) const { return taylor_.base_value() - decrease(s); }

  /// f(x_k) - m_k(x_k + s); positive exactly when s gives strict model decrease.
  double decrease(const Vector& s) const;

  Vector gradient(const Vector& s) const;

  /// m_k(x_k + s + d) - m_k(x_k + s), see TaylorModel::change.
  double change(const Vector& s, const Vector& d) const;

  double regularization(const Vector& s) const;

 private:
  TaylorModel taylor_;
  double sigma_;
  double power_;
};

/// 1/n! for small n.
double inverse_factorial(int n);

/// n! as a double.
double factorial(int n);

}  // namespace arp
