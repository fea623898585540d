#include "arp/model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arp {

double factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of a negative number");
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

double inverse_factorial(int n) { return 1.0 / factorial(n); }

TaylorModel::TaylorModel(Vector base_point, double base_value, Vector gradient_at_base, int order,
                         std::vector<DerivativeTensorPtr> higher)
    : base_point_(std::move(base_point)),
      base_value_(base_value),
      gradient_(std::move(gradient_at_base)),
      order_(order),
      higher_(std::move(higher)) {
  if (order_ < 1) throw std::invalid_argument("Taylor model order must be at least 1");
  if (base_point_.size() == 0 || gradient_.size() != base_point_.size()) {
    throw std::invalid_argument("Taylor model: base point and gradient dimensions differ");
  }
  if (static_cast<int>(higher_.size()) != order_ - 1) {
    throw std::invalid_argument(
        fmt::format("Taylor model of order {} needs {} derivative tensors, got {}", order_,
                    order_ - 1, higher_.size()));
  }
  for (size_t i = 0; i < higher_.size(); ++i) {
    if (!higher_[i] || higher_[i]->order() != static_cast<int>(i) + 2) {
      throw std::invalid_argument(fmt::format("Taylor model: slot {} must hold order {}", i, i + 2));
    }
  }
}

TaylorModel TaylorModel::capture(CountedProblem& problem, const Vector& x, double fx,
                                 const Vector& gx, int order) {
  if (order > problem.problem().max_order()) {
    throw std::out_of_range(fmt::format("Taylor order {} exceeds the maximum order {} of {}",
                                        order, problem.problem().max_order(),
                                        problem.problem().name()));
  }
  std::vector<DerivativeTensorPtr> higher;
  higher.reserve(static_cast<size_t>(std::max(order - 1, 0)));
  for (int j = 2; j <= order; ++j) higher.push_back(problem.derivative(j, x));
  return TaylorModel(x, fx, gx, order, std::move(higher));
}

void TaylorModel::check(const Vector& s) const {
  if (s.size() != base_point_.size()) {
    throw std::invalid_argument(fmt::format("Taylor model: step has {} coordinates, expected {}",
                                            s.size(), base_point_.size()));
  }
}

double TaylorModel::decrease(const Vector& s) const {
  check(s);
  double change = gradient_.dot(s);
  for (const auto& tensor : higher_) {
    change += inverse_factorial(tensor->order()) * tensor->contract_full(s);
  }
  return -change;
}

Vector TaylorModel::gradient(const Vector& s) const {
  check(s);
  Vector g = gradient_;
  for (const auto& tensor : higher_) {
    g += inverse_factorial(tensor->order() - 1) * tensor->contract(s);
  }
  return g;
}

double TaylorModel::change(const Vector& s, const Vector& d) const {
  check(s);
  check(d);
  // grad T(s + tau d) . d has degree p - 1 in tau; n nodes integrate degree 2n - 1 exactly.
  static constexpr double kNodes[][4] = {{0.0},
                                         {-0.5773502691896257645, 0.5773502691896257645},
                                         {-0.7745966692414833770, 0.0, 0.7745966692414833770},
                                         {-0.8611363115940525752, -0.3399810435848562648,
                                          0.3399810435848562648, 0.8611363115940525752}};
  static constexpr double kWeights[][4] = {{2.0},
                                           {1.0, 1.0},
                                           {0.5555555555555555556, 0.8888888888888888889,
                                            0.5555555555555555556},
                                           {0.3478548451374538574, 0.6521451548625461426,
                                            0.6521451548625461426, 0.3478548451374538574}};
  const int points = std::max(1, (order_ + 1) / 2);
  if (points > 4) return decrease(s) - decrease(s + d);
  double total = 0.0;
  for (int i = 0; i < points; ++i) {
    const double tau = 0.5 * (kNodes[points - 1][i] + 1.0);
    total += 0.5 * kWeights[points - 1][i] * gradient(s + tau * d).dot(d);
  }
  return total;
}

double TaylorModel::directional_norm(int j, const Vector& s) const {
  check(s);
  if (j == 1) return gradient_.norm();
  if (j < 2 || j > order_) throw std::out_of_range("directional_norm: order out of range");
  const double norm = s.norm();
  if (norm == 0.0) return 0.0;
  return higher_[static_cast<size_t>(j - 2)]->contract(s / norm).norm();
}

RegularizedModel::RegularizedModel(TaylorModel taylor, double sigma, double power)
    : taylor_(std::move(taylor)), sigma_(sigma), power_(power) {
  if (!(sigma_ >= 0.0) || !std::isfinite(sigma_)) {
    throw std::invalid_argument("regularization weight must be finite and nonnegative");
  }
  if (!(power_ > taylor_.order()) || !std::isfinite(power_)) {
    throw std::invalid_argument(fmt::format("regularization power r = {} must exceed order p = {}",
                                            power_, taylor_.order()));
  }
}

double RegularizedModel::regularization(const Vector& s) const {
  return sigma_ / power_ * std::pow(s.norm(), power_);
}

double RegularizedModel::decrease(const Vector& s) const {
  return taylor_.decrease(s) - regularization(s);
}

double RegularizedModel::change(const Vector& s, const Vector& d) const {
  const double b = s.norm();
  const double a = (s + d).norm();
  double reg_change = 0.0;
  if (b == 0.0) {
    reg_change = std::pow(a, power_);
  } else if (a + b > 0.0) {
    // a^r - b^r = b^r (exp(r log(1 + (a - b)/b)) - 1), with a - b formed without cancellation.
    const double a_minus_b = (2.0 * s.dot(d) + d.squaredNorm()) / (a + b);
    reg_change = std::pow(b, power_) * std::expm1(power_ * std::log1p(a_minus_b / b));
  }
  return taylor_.change(s, d) + sigma_ / power_ * reg_change;
}

Vector RegularizedModel::gradient(const Vector& s) const {
  Vector g = taylor_.gradient(s);
  const double norm = s.norm();
  if (norm > 0.0) g += sigma_ * std::pow(norm, power_ - 2.0) * s;
  return g;
}

}  // namespace arp
