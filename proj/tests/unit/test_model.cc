#include "arp/corpus.hpp"
#include "arp/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace arp;

namespace {

/// f(x) = x^4 in one dimension, all derivatives by hand.
class QuarticLine final : public Problem {
 public:
  std::string name() const override { return "x^4"; }
  int dimension() const override { return 1; }
  int max_order() const override { return 4; }
  double value(const Vector& x) const override { return std::pow(x[0], 4); }
  Vector gradient(const Vector& x) const override { return Vector::Constant(1, 4 * std::pow(x[0], 3)); }
  DerivativeTensorPtr derivative(int order, const Vector& x) const override {
    require_order(order);
    const double t = x[0];
    const double d = order == 2 ? 12 * t * t : order == 3 ? 24 * t : 24.0;
    struct Line final : DerivativeTensor {
      int j;
      double d;
      Line(int j, double d) : j(j), d(d) {}
      int order() const override { return j; }
      Vector contract(const Vector& s) const override { return Vector::Constant(1, d * std::pow(s[0], j - 1)); }
      double contract_full(const Vector& s) const override { return d * std::pow(s[0], j); }
    };
    return std::make_shared<Line>(order, d);
  }
};

TaylorModel quartic_model(int p, double x = 1.0) {
  QuarticLine f;
  CountedProblem counted(f);
  const Vector xv = Vector::Constant(1, x);
  return TaylorModel::capture(counted, xv, f.value(xv), f.gradient(xv), p);
}

Vector one(double v) { return Vector::Constant(1, v); }

}  // namespace

TEST(TaylorModel, ZeroStepGivesBaseValue) {
  for (int p = 1; p <= 4; ++p) {
    const auto m = quartic_model(p, 1.3);
    EXPECT_EQ(m.value(one(0.0)), std::pow(1.3, 4));
    EXPECT_EQ(m.gradient(one(0.0))[0], 4 * std::pow(1.3, 3));
  }
}

TEST(TaylorModel, QuarticSecondOrder) {
  const auto m = quartic_model(2);
  EXPECT_DOUBLE_EQ(m.value(one(0.5)), 4.5);
  EXPECT_DOUBLE_EQ(m.gradient(one(0.5))[0], 10.0);
}

TEST(TaylorModel, QuarticFourthOrderIsExact) {
  const auto m = quartic_model(4);
  for (double s : {-2.0, -0.7, 0.1, 0.5, 3.0}) {
    EXPECT_NEAR(m.value(one(s)), std::pow(1.0 + s, 4), 1e-12 * std::pow(1.0 + s, 4) + 1e-15);
  }
}

TEST(TaylorModel, OrderBeyondProblemThrows) {
  const auto e = make_holder_power(1.5);
  CountedProblem counted(*e.problem);
  const Vector x = e.default_start;
  EXPECT_THROW(TaylorModel::capture(counted, x, 0.0, x, 2), std::out_of_range);
}

TEST(TaylorModel, DimensionMismatchThrows) {
  const auto m = quartic_model(2);
  EXPECT_THROW(m.value(Vector::Zero(2)), std::invalid_argument);
}

TEST(RegularizedModel, Examples) {
  const RegularizedModel m(quartic_model(2), 3.0, 3.0);
  EXPECT_DOUBLE_EQ(m.value(one(0.5)), 4.625);
  // The regularizer's gradient is sigma |s|^{r-2} s = 3 * 0.5 * 0.5, so 10 + 0.75.
  EXPECT_DOUBLE_EQ(m.gradient(one(0.5))[0], 10.75);
  EXPECT_DOUBLE_EQ(m.taylor().gradient(one(0.5))[0], 10.0);
  EXPECT_EQ(m.value(one(0.0)), 1.0);
  EXPECT_EQ(m.gradient(one(0.0))[0], 4.0);
}

TEST(RegularizedModel, ZeroSigmaEqualsTaylor) {
  const auto t = quartic_model(3);
  const RegularizedModel m(t, 0.0, 3.5);
  for (double s : {-1.0, 0.2, 2.0}) EXPECT_EQ(m.value(one(s)), t.value(one(s)));
}

TEST(RegularizedModel, DominatesTaylor) {
  const auto t = quartic_model(2);
  const RegularizedModel m(t, 0.7, 3.0);
  EXPECT_EQ(m.value(one(0.0)), t.value(one(0.0)));
  for (double s : {-1.0, -1e-3, 1e-3, 0.2, 2.0}) EXPECT_GT(m.value(one(s)), t.value(one(s)));
}

TEST(RegularizedModel, ValidatesParameters) {
  EXPECT_THROW(RegularizedModel(quartic_model(2), -1.0, 3.0), std::invalid_argument);
  EXPECT_THROW(RegularizedModel(quartic_model(2), 1.0, 2.0), std::invalid_argument);
  EXPECT_NO_THROW(RegularizedModel(quartic_model(2), 1.0, 2.0001));
}

TEST(RegularizedModel, ChangeIsAccurateForTinySteps) {
  // Around s = 1e-6 the model change over d = 1e-12 is ~1e-12 * grad; naive
  // differencing of values near 1 would only keep about four digits.
  const RegularizedModel m(quartic_model(4), 2.0, 4.5);
  const Vector s = one(1e-6), d = one(1e-12);
  const double expected = m.gradient(s)[0] * d[0];
  EXPECT_NEAR(m.change(s, d), expected, 1e-9 * std::abs(expected));
  // Exact for the polynomial part over large steps too.
  const Vector big = one(0.8);
  EXPECT_NEAR(m.change(s, big), m.value(s + big) - m.value(s), 1e-12);
}

TEST(Counting, CapturesCountOncePerOrder) {
  const auto e = make_rosenbrock(2);
  CountedProblem counted(*e.problem);
  const Vector x = e.default_start;
  const double fx = counted.value(x);
  const Vector gx = counted.gradient(x);
  const auto t = TaylorModel::capture(counted, x, fx, gx, 4);
  const RegularizedModel m(t, 1.0, 5.0);
  for (int k = 0; k < 50; ++k) {
    m.value(Vector::Constant(2, 0.01 * k));
    m.gradient(Vector::Constant(2, 0.01 * k));
  }
  const auto& c = counted.counters();
  EXPECT_EQ(c.values(), 1);
  EXPECT_EQ(c.gradients(), 1);
  for (int j = 2; j <= 4; ++j) EXPECT_EQ(c.order(j), 1);
}

// Finite-difference consistency of the model gradients on every corpus entry.
class ModelConsistency : public ::testing::TestWithParam<std::string> {};

TEST_P(ModelConsistency, GradientsMatchFiniteDifferences) {
  const auto e = make_entry(GetParam());
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss;
  const int n = e.dimension();
  for (int sample = 0; sample < 100; ++sample) {
    Vector x(n), s(n);
    for (int i = 0; i < n; ++i) {
      x[i] = e.default_start[i] + 0.3 * gauss(rng);
      s[i] = 0.5 * gauss(rng);
    }
    const int p = e.supported_orders();
    CountedProblem counted(*e.problem);
    const auto t = TaylorModel::capture(counted, x, e.problem->value(x), e.problem->gradient(x), p);
    const RegularizedModel m(t, 0.5 + sample % 3, p + 1.0);
    const double h = 1e-6;
    Vector fd_t(n), fd_m(n);
    for (int i = 0; i < n; ++i) {
      Vector step = Vector::Zero(n);
      step[i] = h;
      fd_t[i] = (t.decrease(s - step) - t.decrease(s + step)) / (2 * h);
      fd_m[i] = (m.decrease(s - step) - m.decrease(s + step)) / (2 * h);
    }
    const Vector gt = t.gradient(s), gm = m.gradient(s);
    EXPECT_LE((fd_t - gt).norm(), 1e-6 * std::max(1.0, gt.norm())) << e.name << " sample " << sample;
    EXPECT_LE((fd_m - gm).norm(), 1e-6 * std::max(1.0, gm.norm())) << e.name << " sample " << sample;
  }
}

INSTANTIATE_TEST_SUITE_P(Corpus, ModelConsistency,
                         ::testing::Values("quadratic", "rosenbrock-2", "rosenbrock-4", "holder-power(1.5)",
                                           "holder-power(2.5)", "holder-power(3.5)", "shifted-holder(1.5)",
                                           "shifted-holder(2.5)", "quartic-valley"),
                         [](const auto& info) {
                           std::string name = info.param;
                           for (char& c : name) {
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           }
                           return name;
                         });

// Polynomial corpus problems are reproduced exactly by the Taylor model of their degree.
TEST(PolynomialExactness, TaylorOfDegreeIsExact) {
  struct Case {
    CorpusEntry entry;
    int degree;
  };
  std::vector<Case> cases = {{make_quadratic(), 2}, {make_rosenbrock(2), 4}, {make_rosenbrock(4), 4},
                             {make_quartic_valley(), 4}};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (auto& c : cases) {
    const int n = c.entry.dimension();
    for (int k = 0; k < 50; ++k) {
      Vector x(n), s(n);
      for (int i = 0; i < n; ++i) {
        x[i] = gauss(rng);
        s[i] = gauss(rng);
      }
      CountedProblem counted(*c.entry.problem);
      const auto t = TaylorModel::capture(counted, x, c.entry.problem->value(x), c.entry.problem->gradient(x),
                                          c.degree);
      const double exact = c.entry.problem->value(x + s);
      EXPECT_NEAR(t.value(s), exact, 1e-10 * std::max(1.0, std::abs(exact))) << c.entry.name;
    }
  }
}
