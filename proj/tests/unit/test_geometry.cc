#include "arp/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using arp::FeasibleSet;
using arp::Vector;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

std::vector<FeasibleSet> sample_sets(int n) {
  return {FeasibleSet::whole_space(), FeasibleSet::nonnegative_orthant(),
          FeasibleSet::box(Vector::Constant(n, -1.0), Vector::LinSpaced(n, 0.5, 2.0)),
          FeasibleSet::ball(Vector::LinSpaced(n, -0.5, 0.5), 1.5)};
}

}  // namespace

TEST(Project, WholeSpaceIsIdentity) {
  EXPECT_EQ(FeasibleSet::whole_space().project(vec({2, -3})), vec({2, -3}));
}

TEST(Project, BoxClampsCoordinates) {
  const auto box = FeasibleSet::box(vec({-1, -1}), vec({1, 1}));
  EXPECT_EQ(box.project(vec({2, 0.5})), vec({1, 0.5}));
}

TEST(Project, BallScalesRadially) {
  const auto ball = FeasibleSet::ball(vec({0, 0}), 1.0);
  const Vector p = ball.project(vec({3, 4}));
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_NEAR(p[1], 0.8, 1e-15);
}

TEST(Project, BallCenterIsInterior) {
  const auto ball = FeasibleSet::ball(vec({0.3, -0.2}), 2.0);
  EXPECT_EQ(ball.project(vec({0.3, -0.2})), vec({0.3, -0.2}));
}

TEST(Project, OrthantClipsNegatives) {
  EXPECT_EQ(FeasibleSet::nonnegative_orthant().project(vec({-2, 3, 0})), vec({0, 3, 0}));
}

TEST(Project, DimensionMismatchThrows) {
  const auto box = FeasibleSet::box(vec({-1, -1}), vec({1, 1}));
  EXPECT_THROW(box.project(vec({1, 2, 3})), std::invalid_argument);
  const auto ball = FeasibleSet::ball(vec({0, 0}), 1.0);
  EXPECT_THROW(ball.project(vec({1})), std::invalid_argument);
}

TEST(Project, NonFiniteInputThrows) {
  EXPECT_THROW(FeasibleSet::whole_space().project(vec({std::nan(""), 0})), std::invalid_argument);
}

TEST(FeasibleSetFactories, RejectInvalidParameters) {
  EXPECT_THROW(FeasibleSet::box(vec({1, 0}), vec({0, 1})), std::invalid_argument);
  EXPECT_THROW(FeasibleSet::box(vec({0}), vec({0, 1})), std::invalid_argument);
  EXPECT_THROW(FeasibleSet::ball(vec({0, 0}), 0.0), std::invalid_argument);
  EXPECT_THROW(FeasibleSet::ball(vec({0, 0}), -1.0), std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(FeasibleSet::box(vec({inf}), vec({inf})), std::invalid_argument);
  EXPECT_NO_THROW(FeasibleSet::box(vec({-inf}), vec({inf})));
}

TEST(FeasibleSetFactories, KindNames) {
  EXPECT_EQ(FeasibleSet::whole_space().kind(), "whole-space");
  EXPECT_EQ(FeasibleSet::nonnegative_orthant().kind(), "orthant");
  EXPECT_EQ(FeasibleSet::box(vec({0}), vec({1})).kind(), "box");
  EXPECT_EQ(FeasibleSet::ball(vec({0}), 1).kind(), "ball");
}

TEST(Criticality, WholeSpaceIsGradientNorm) {
  EXPECT_EQ(arp::criticality(FeasibleSet::whole_space(), vec({7, -1}), vec({3, 4})), 5.0);
}

TEST(Criticality, BoxCorner) {
  const auto box = FeasibleSet::box(vec({0, 0}), vec({1, 1}));
  EXPECT_DOUBLE_EQ(arp::criticality(box, vec({0, 0}), vec({1, -1})), 1.0);
}

TEST(Criticality, BallBoundary) {
  const auto ball = FeasibleSet::ball(vec({0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(arp::criticality(ball, vec({1, 0}), vec({1, 0})), 1.0);
}

TEST(Criticality, InfeasiblePointThrows) {
  const auto box = FeasibleSet::box(vec({0, 0}), vec({1, 1}));
  EXPECT_THROW(arp::criticality(box, vec({1.1, 0}), vec({1, 1})), std::invalid_argument);
  // Within the 1e-10 feasibility tolerance is accepted.
  EXPECT_NO_THROW(arp::criticality(box, vec({1 + 5e-11, 0}), vec({1, 1})));
}

TEST(Translated, MatchesShiftedProjection) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  for (const auto& set : sample_sets(3)) {
    const Vector offset = set.project(Vector::Constant(3, 0.25));
    const auto shifted = set.translated(offset);
    for (int k = 0; k < 100; ++k) {
      Vector y(3);
      for (int i = 0; i < 3; ++i) y[i] = 2.0 * gauss(rng);
      const Vector expected = set.project(offset + y) - offset;
      EXPECT_LE((shifted.project(y) - expected).norm(), 1e-12) << set.kind();
    }
  }
}

// Property tests over >= 1000 random pairs per set variant.
class ProjectionProperties : public ::testing::TestWithParam<int> {};

TEST_P(ProjectionProperties, IdempotentAndNonexpansive) {
  const int n = 4;
  const auto set = sample_sets(n)[static_cast<size_t>(GetParam())];
  std::mt19937_64 rng(1000 + GetParam());
  std::normal_distribution<double> gauss;
  auto random_point = [&] {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = 3.0 * gauss(rng);
    return v;
  };
  for (int k = 0; k < 1000; ++k) {
    const Vector x = random_point(), y = random_point();
    const Vector px = set.project(x), py = set.project(y);
    EXPECT_LE((set.project(px) - px).norm(), 1e-12 * std::max(1.0, px.norm())) << set.kind();
    EXPECT_LE((px - py).norm(), (x - y).norm() * (1 + 1e-12)) << set.kind();
    EXPECT_TRUE(set.contains(px)) << set.kind();

    // Criticality facts at a feasible point.
    const Vector g = random_point(), g2 = random_point();
    EXPECT_LE(arp::criticality(set, px, Vector::Zero(n)), 1e-14 * (1.0 + px.norm()));
    EXPECT_LE(std::abs(arp::criticality(set, px, g) - arp::criticality(set, px, g2)),
              (g - g2).norm() * (1 + 1e-12) + 1e-14);
  }
}

std::string variant_name(const ::testing::TestParamInfo<int>& info) {
  static const char* names[] = {"WholeSpace", "Orthant", "Box", "Ball"};
  return names[info.param];
}

INSTANTIATE_TEST_SUITE_P(AllVariants, ProjectionProperties, ::testing::Values(0, 1, 2, 3), variant_name);

TEST(ProjectionProperties, BallProjectionIsNearest) {
  // Brute-force check on the circle that the radial point is the nearest one.
  const auto ball = FeasibleSet::ball(vec({0.5, -0.5}), 1.0);
  const Vector x = vec({3, 1});
  const Vector p = ball.project(x);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100000; ++k) {
    const double t = 2 * M_PI * k / 100000.0;
    best = std::min(best, (vec({0.5 + std::cos(t), -0.5 + std::sin(t)}) - x).norm());
  }
  EXPECT_NEAR((p - x).norm(), best, 1e-8);
}
