#pragma once

#include <Eigen/Core>

#include <string>
#include <variant>

namespace arp {

/// Points and steps in R^n.
using Vector = Eigen::VectorXd;

/// Absolute distance-to-set slack accepted when a point is required to be feasible.
inline constexpr double kFeasibilityTolerance = 1e-10;

/// Throws std::invalid_argument unless every coordinate of `x` is finite.
void require_finite(const Vector& x, const char* what);

/// Closed convex set with a closed-form Euclidean projection.
///
/// WholeSpace and NonnegativeOrthant adapt to the dimension of the argument;
/// Box and Ball carry their own dimension and reject mismatched points.
class FeasibleSet {
 public:
  struct WholeSpace {};
  struct NonnegativeOrthant {};
  struct Box {
    Vector lower;
    Vector upper;
  };
  struct Ball {
    Vector center;
    double radius = 1.0;
  };
  using Variant = std::variant<WholeSpace, Box, Ball, NonnegativeOrthant>;

  FeasibleSet() = default;

  static FeasibleSet whole_space();
  static FeasibleSet nonnegative_orthant();
  /// Bounds may be infinite (a half-line in that coordinate) but not NaN.
  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet ball(Vector center, double radius);

  const Variant& variant() const { return set_; }

  /// "whole-space", "box", "ball" or "orthant".
  std::string kind() const;

  /// Dimension fixed by the set, or -1 when the set adapts to its argument.
  int dimension() const;

  /// Euclidean projection. Throws on dimension mismatch or non-finite input.
  Vector project(const Vector& x) const;

  /// The set {y : offset + y in this set}. Projecting steps in these shifted
  /// coordinates keeps them accurate far below the spacing of doubles near
  /// the offset, which P(offset + y) - offset does not.
  FeasibleSet translated(const Vector& offset) const;

  /// Euclidean distance from `x` to the set.
  double distance(const Vector& x) const;

  bool contains(const Vector& x, double tolerance = kFeasibilityTolerance) const {
    return distance(x) <= tolerance;
  }

 private:
  explicit FeasibleSet(Variant set) : set_(std::move(set)) {}
  void check_dimension(const Vector& x) const;

  Variant set_ = WholeSpace{};
};

/// First-order criticality measure ||P[x - grad] - x||.
///
/// Requires `x` to lie in `set` up to kFeasibilityTolerance; reduces to ||grad||
/// on the whole space.
double criticality(const FeasibleSet& set, const Vector& x, const Vector& grad);

}  // namespace arp
