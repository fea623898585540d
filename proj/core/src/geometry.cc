#include "arp/geometry.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arp {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) {
    throw std::invalid_argument(fmt::format("{} has non-finite coordinates", what));
  }
}

FeasibleSet FeasibleSet::whole_space() { return FeasibleSet(WholeSpace{}); }

FeasibleSet FeasibleSet::nonnegative_orthant() { return FeasibleSet(NonnegativeOrthant{}); }

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw std::invalid_argument("box bounds must be non-empty and of equal dimension");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] == kInf || upper[i] == -kInf) {
      throw std::invalid_argument(fmt::format("box bounds at coordinate {} are not usable", i));
    }
    if (lower[i] > upper[i]) {
      throw std::invalid_argument(
          fmt::format("box lower bound exceeds upper bound at coordinate {}", i));
    }
  }
  return FeasibleSet(Box{std::move(lower), std::move(upper)});
}

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  if (center.size() == 0) throw std::invalid_argument("ball center must be non-empty");
  require_finite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball radius must be positive and finite");
  }
  return FeasibleSet(Ball{std::move(center), radius});
}

std::string FeasibleSet::kind() const {
  struct {
    std::string operator()(const WholeSpace&) const { return "whole-space"; }
    std::string operator()(const Box&) const { return "box"; }
    std::string operator()(const Ball&) const { return "ball"; }
    std::string operator()(const NonnegativeOrthant&) const { return "orthant"; }
  } visitor;
  return std::visit(visitor, set_);
}

int FeasibleSet::dimension() const {
  if (const auto* b = std::get_if<Box>(&set_)) return static_cast<int>(b->lower.size());
  if (const auto* b = std::get_if<Ball>(&set_)) return static_cast<int>(b->center.size());
  return -1;
}

void FeasibleSet::check_dimension(const Vector& x) const {
  const int n = dimension();
  if (x.size() == 0 || (n >= 0 && x.size() != n)) {
    throw std::invalid_argument(fmt::format(
        "dimension mismatch: point has {} coordinates, set has {}", x.size(), n));
  }
}

Vector FeasibleSet::project(const Vector& x) const {
  check_dimension(x);
  require_finite(x, "projected point");
  if (std::holds_alternative<WholeSpace>(set_)) return x;
  if (std::holds_alternative<NonnegativeOrthant>(set_)) return x.cwiseMax(0.0);
  if (const auto* b = std::get_if<Box>(&set_)) return x.cwiseMax(b->lower).cwiseMin(b->upper);
  const auto& ball = std::get<Ball>(set_);
  const Vector offset = x - ball.center;
  const double norm = offset.norm();
  if (norm <= ball.radius) return x;
  return ball.center + offset * (ball.radius / norm);
}

FeasibleSet FeasibleSet::translated(const Vector& offset) const {
  check_dimension(offset);
  require_finite(offset, "translation offset");
  if (std::holds_alternative<WholeSpace>(set_)) return *this;
  if (std::holds_alternative<NonnegativeOrthant>(set_)) {
    return box(-offset, Vector::Constant(offset.size(), kInf));
  }
  if (const auto* b = std::get_if<Box>(&set_)) return box(b->lower - offset, b->upper - offset);
  const auto& ball = std::get<Ball>(set_);
  return FeasibleSet(Ball{ball.center - offset, ball.radius});
}

double FeasibleSet::distance(const Vector& x) const {
  check_dimension(x);
  if (std::holds_alternative<WholeSpace>(set_)) return 0.0;
  if (const auto* ball = std::get_if<Ball>(&set_)) {
    return std::max(0.0, (x - ball->center).norm() - ball->radius);
  }
  return (project(x) - x).norm();
}

double criticality(const FeasibleSet& set, const Vector& x, const Vector& grad) {
  if (grad.size() != x.size()) {
    throw std::invalid_argument("criticality: gradient and point dimensions differ");
  }
  const double gap = set.distance(x);
  if (!(gap <= kFeasibilityTolerance)) {
    throw std::invalid_argument(
        fmt::format("criticality: point is infeasible (distance {:.3e} to the set)", gap));
  }
  if (std::holds_alternative<FeasibleSet::WholeSpace>(set.variant())) return grad.norm();
  return (set.project(x - grad) - x).norm();
}

}  // namespace arp
