#include "arp/problem.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace arp {

void Problem::require_order(int order) const {
  if (order < 2 || order > max_order()) {
    throw std::out_of_range(fmt::format("{}: derivative of order {} not available (max order {})",
                                        name(), order, max_order()));
  }
}

Vector Problem::contraction_vector(int order, const Vector& x, const Vector& s) const {
  if (order == 1) return gradient(x);
  return derivative(order, x)->contract(s);
}

double Problem::contraction_scalar(int order, const Vector& x, const Vector& s) const {
  if (order == 1) return gradient(x).dot(s);
  return derivative(order, x)->contract_full(s);
}

const OrderSmoothness& ProblemMeta::at(int p) const {
  for (const auto& entry : smoothness) {
    if (entry.order == p) return entry;
  }
  throw std::out_of_range(fmt::format("no smoothness declared for order {}", p));
}

void ProblemMeta::validate() const {
  for (const auto& entry : smoothness) {
    if (!(entry.beta >= 0.0 && entry.beta <= 1.0)) {
      throw std::invalid_argument(fmt::format("order {}: beta must lie in [0, 1]", entry.order));
    }
    if (entry.order == 1 && entry.beta == 0.0) {
      throw std::invalid_argument("order 1 requires beta in (0, 1]");
    }
    if (!(entry.holder_constant_unscaled >= 0.0)) {
      throw std::invalid_argument(
          fmt::format("order {}: Holder constant must be nonnegative", entry.order));
    }
  }
  if (derivative_bounds) {
    for (double m : *derivative_bounds) {
      if (!(m >= 0.0)) throw std::invalid_argument("derivative bounds must be nonnegative");
    }
  }
}

double CountedProblem::value(const Vector& x) {
  ++counters_.by_order[0];
  return problem_.value(x);
}

Vector CountedProblem::gradient(const Vector& x) {
  ++counters_.by_order[1];
  return problem_.gradient(x);
}

DerivativeTensorPtr CountedProblem::derivative(int order, const Vector& x) {
  auto tensor = problem_.derivative(order, x);
  ++counters_.by_order.at(static_cast<size_t>(order));
  return tensor;
}

}  // namespace arp
