#include "arp/corpus.hpp"

#include "arp/model.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <regex>
#include <stdexcept>

namespace arp {
namespace {

// ---------------------------------------------------------------------------
// Tensors

double ipow(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

/// Order-2 tensor given by a dense symmetric matrix.
class MatrixTensor final : public DerivativeTensor {
 public:
  explicit MatrixTensor(Eigen::MatrixXd m) : m_(std::move(m)) {}
  int order() const override { return 2; }
  Vector contract(const Vector& s) const override { return m_ * s; }
  double contract_full(const Vector& s) const override { return s.dot(m_ * s); }

 private:
  Eigen::MatrixXd m_;
};

/// Diagonal order-j tensor plus an optional symmetric matrix part (order 2 only).
class DiagonalTensor final : public DerivativeTensor {
 public:
  DiagonalTensor(int order, Vector diagonal, const Eigen::MatrixXd* matrix = nullptr)
      : order_(order), diagonal_(std::move(diagonal)), matrix_(matrix) {}
  int order() const override { return order_; }
  Vector contract(const Vector& s) const override {
    Vector out(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) out[i] = diagonal_[i] * ipow(s[i], order_ - 1);
    if (matrix_) out += *matrix_ * s;
    return out;
  }
  double contract_full(const Vector& s) const override {
    double total = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) total += diagonal_[i] * ipow(s[i], order_);
    if (matrix_) total += s.dot(*matrix_ * s);
    return total;
  }

 private:
  int order_;
  Vector diagonal_;
  const Eigen::MatrixXd* matrix_;
};

class ZeroTensor final : public DerivativeTensor {
 public:
  ZeroTensor(int order, Eigen::Index n) : order_(order), n_(n) {}
  int order() const override { return order_; }
  Vector contract(const Vector&) const override { return Vector::Zero(n_); }
  double contract_full(const Vector&) const override { return 0.0; }

 private:
  int order_;
  Eigen::Index n_;
};

/// Chained Rosenbrock derivative of order 2, 3 or 4, frozen at x.
class RosenbrockTensor final : public DerivativeTensor {
 public:
  RosenbrockTensor(int order, Vector x) : order_(order), x_(std::move(x)) {}
  int order() const override { return order_; }

  // Each term g(a, b) = 100 (b - a^2)^2 + (1 - a)^2 couples a = x_i and b = x_{i+1}.
  // Nonzero partials: g_aa = 1200 a^2 - 400 b + 2, g_ab = -400 a, g_bb = 200,
  // g_aaa = 2400 a, g_aab = -400, g_aaaa = 2400.
  Vector contract(const Vector& s) const override {
    Vector out = Vector::Zero(x_.size());
    for (Eigen::Index i = 0; i + 1 < x_.size(); ++i) {
      const double a = x_[i], b = x_[i + 1], da = s[i], db = s[i + 1];
      switch (order_) {
        case 2:
          out[i] += (1200.0 * a * a - 400.0 * b + 2.0) * da - 400.0 * a * db;
          out[i + 1] += -400.0 * a * da + 200.0 * db;
          break;
        case 3:
          out[i] += 2400.0 * a * da * da - 800.0 * da * db;
          out[i + 1] += -400.0 * da * da;
          break;
        default:
          out[i] += 2400.0 * da * da * da;
          break;
      }
    }
    return out;
  }
  double contract_full(const Vector& s) const override {
    double total = 0.0;
    for (Eigen::Index i = 0; i + 1 < x_.size(); ++i) {
      const double a = x_[i], b = x_[i + 1], da = s[i], db = s[i + 1];
      switch (order_) {
        case 2:
          total += (1200.0 * a * a - 400.0 * b + 2.0) * da * da - 800.0 * a * da * db +
                   200.0 * db * db;
          break;
        case 3:
          total += 2400.0 * a * da * da * da - 1200.0 * da * da * db;
          break;
        default:
          total += 2400.0 * da * da * da * da;
          break;
      }
    }
    return total;
  }

 private:
  int order_;
  Vector x_;
};

// ---------------------------------------------------------------------------
// Problems

class QuadraticProblem final : public Problem {
 public:
  QuadraticProblem(Eigen::MatrixXd A, Vector b) : A_(std::move(A)), b_(std::move(b)) {}
  std::string name() const override { return "quadratic"; }
  int dimension() const override { return static_cast<int>(b_.size()); }
  int max_order() const override { return 4; }
  double value(const Vector& x) const override { return 0.5 * x.dot(A_ * x) + b_.dot(x); }
  Vector gradient(const Vector& x) const override { return A_ * x + b_; }
  DerivativeTensorPtr derivative(int order, const Vector&) const override {
    require_order(order);
    if (order == 2) return std::make_shared<MatrixTensor>(A_);
    return std::make_shared<ZeroTensor>(order, b_.size());
  }

 private:
  Eigen::MatrixXd A_;
  Vector b_;
};

class RosenbrockProblem final : public Problem {
 public:
  explicit RosenbrockProblem(int n) : n_(n) {}
  std::string name() const override { return fmt::format("rosenbrock-{}", n_); }
  int dimension() const override { return n_; }
  int max_order() const override { return 4; }
  double value(const Vector& x) const override {
    double total = 0.0;
    for (int i = 0; i + 1 < n_; ++i) {
      const double u = x[i + 1] - x[i] * x[i];
      total += 100.0 * u * u + (1.0 - x[i]) * (1.0 - x[i]);
    }
    return total;
  }
  Vector gradient(const Vector& x) const override {
    Vector g = Vector::Zero(n_);
    for (int i = 0; i + 1 < n_; ++i) {
      const double u = x[i + 1] - x[i] * x[i];
      g[i] += -400.0 * x[i] * u - 2.0 * (1.0 - x[i]);
      g[i + 1] += 200.0 * u;
    }
    return g;
  }
  DerivativeTensorPtr derivative(int order, const Vector& x) const override {
    require_order(order);
    return std::make_shared<RosenbrockTensor>(order, x);
  }

 private:
  int n_;
};

/// Univariate profile phi with derivatives of order 0..4.
using Profile = std::function<double(int order, double t)>;

/// f(x) = sum_i phi(x_i) + 1/2 x'Cx.
class SeparableProblem final : public Problem {
 public:
  SeparableProblem(std::string name, int n, int max_order, Profile phi, Eigen::MatrixXd coupling)
      : name_(std::move(name)), n_(n), max_order_(max_order), phi_(std::move(phi)),
        coupling_(std::move(coupling)) {}
  std::string name() const override { return name_; }
  int dimension() const override { return n_; }
  int max_order() const override { return max_order_; }
  double value(const Vector& x) const override {
    double total = 0.5 * x.dot(coupling_ * x);
    for (int i = 0; i < n_; ++i) total += phi_(0, x[i]);
    return total;
  }
  Vector gradient(const Vector& x) const override {
    Vector g = coupling_ * x;
    for (int i = 0; i < n_; ++i) g[i] += phi_(1, x[i]);
    return g;
  }
  DerivativeTensorPtr derivative(int order, const Vector& x) const override {
    require_order(order);
    Vector d(n_);
    for (int i = 0; i < n_; ++i) d[i] = phi_(order, x[i]);
    return std::make_shared<DiagonalTensor>(order, std::move(d), order == 2 ? &coupling_ : nullptr);
  }

 private:
  std::string name_;
  int n_;
  int max_order_;
  Profile phi_;
  Eigen::MatrixXd coupling_;
};

// ---------------------------------------------------------------------------
// Holder-power profile |t|^q / q

bool is_integer(double q) { return std::floor(q) == q; }

/// c_j = prod_{i=1}^{j-1} (q - i); phi^(j)(t) = c_j |t|^{q-j} sign(t)^j for j >= 1.
double power_coefficient(double q, int j) {
  double c = 1.0;
  for (int i = 1; i < j; ++i) c *= q - i;
  return c;
}

double holder_profile(double q, int order, double t) {
  if (order == 0) return std::pow(std::abs(t), q) / q;
  const double c = power_coefficient(q, order);
  if (c == 0.0) return 0.0;
  const double magnitude = c * std::pow(std::abs(t), q - order);
  if (order % 2 == 0) return magnitude;
  return t < 0.0 ? -magnitude : (t > 0.0 ? magnitude : 0.0);
}

/// 1 - cos t and its derivatives. The constant keeps f(0) = 0, so values near
/// the minimizer resolve decreases far below the spacing of doubles near -1;
/// 2 sin^2(t/2) avoids the cancellation in 1 - cos t.
double cosine_profile(int order, double t) {
  if (order == 0) {
    const double h = std::sin(0.5 * t);
    return 2.0 * h * h;
  }
  switch (order % 4) {
    case 0: return -std::cos(t);
    case 1: return std::sin(t);
    case 2: return std::cos(t);
    default: return -std::sin(t);
  }
}

/// Smoothness of order j for sum |x_i|^q/q on R^n, with `radius` bounding |x_i|
/// on the region where region-dependent constants are needed.
OrderSmoothness holder_power_smoothness(double q, int j, int n, double radius) {
  OrderSmoothness s;
  s.order = j;
  const double excess = q - j;
  if (is_integer(q) && static_cast<int>(q) % 2 == 0 && j >= q) {
    s.beta = 1.0;
    s.holder_constant_unscaled = 0.0;
    s.certified = true;
  } else if (excess >= 1.0) {
    // Lipschitz with the sup of the next derivative, c_{j+1} |t|^{q-j-1}.
    s.beta = 1.0;
    s.holder_constant_unscaled = std::abs(power_coefficient(q, j + 1)) * std::pow(radius, excess - 1.0);
    s.certified = excess == 1.0;
  } else {
    // |a|^b - |b|^b <= |a-b|^b; the odd (signed) profile doubles up to 2^{1-b}.
    s.beta = excess;
    double constant = std::abs(power_coefficient(q, j));
    if (j % 2 == 1) constant *= std::pow(2.0, 1.0 - s.beta);
    if (j == 1) constant *= std::pow(static_cast<double>(n), (1.0 - s.beta) / 2.0);
    s.holder_constant_unscaled = constant;
    s.certified = true;
  }
  return s;
}

double sup_holder_derivative(double q, int j, double radius) {
  if (j == 0) return std::pow(radius, q) / q;
  return std::abs(power_coefficient(q, j)) * std::pow(radius, q - j);
}

Vector alternating(int n, double first, double second) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = i % 2 == 0 ? first : second;
  return v;
}

void require_dimension(int n, int minimum, const char* family) {
  if (n < minimum) {
    throw std::invalid_argument(fmt::format("{} needs dimension >= {} (got {})", family, minimum, n));
  }
}

}  // namespace

int holder_power_max_order(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw std::invalid_argument(fmt::format("Holder exponent q must exceed 1 (got {})", q));
  }
  if (is_integer(q)) {
    const int qi = static_cast<int>(q);
    return qi % 2 == 0 ? 4 : std::min(4, qi - 1);
  }
  return std::min(4, static_cast<int>(std::ceil(q)) - 1);
}

CorpusEntry make_quadratic(const Eigen::MatrixXd& A, const Vector& b, Vector start) {
  const auto n = b.size();
  if (n < 1 || A.rows() != n || A.cols() != n || start.size() != n) {
    throw std::invalid_argument("quadratic: A, b and start dimensions disagree");
  }
  if (!A.isApprox(A.transpose(), 1e-14)) throw std::invalid_argument("quadratic: A must be symmetric");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 0.0)) throw std::invalid_argument("quadratic: A must be positive definite");

  CorpusEntry e;
  e.name = "quadratic";
  e.family = "quadratic";
  e.problem = std::make_shared<QuadraticProblem>(A, b);
  const Vector minimizer = A.ldlt().solve(-b);
  e.meta.known_minimizer = minimizer;
  e.meta.f_low = e.problem->value(minimizer);
  e.meta.smoothness = {{1, 1.0, lmax, true}, {2, 1.0, 0.0, true}, {3, 1.0, 0.0, true},
                       {4, 1.0, 0.0, true}};
  // Level set of the start: ||x - x*|| <= sqrt(2 (f0 - f*) / lmin).
  const double gap = std::max(0.0, e.problem->value(start) - e.meta.f_low);
  const double radius = std::sqrt(2.0 * gap / lmin);
  e.meta.derivative_bounds = std::vector<double>{lmax * radius, lmax, 0.0, 0.0};
  e.default_start = std::move(start);
  e.default_set = FeasibleSet::whole_space();
  return e;
}

CorpusEntry make_quadratic(int n) {
  require_dimension(n, 1, "quadratic");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 4.0;
    if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = 1.0;
  }
  Vector b(n);
  for (int i = 0; i < n; ++i) b[i] = (i % 2 == 0 ? 1.0 : -1.0) * (i + 1);
  return make_quadratic(A, b, alternating(n, 2.0, -1.5));
}

CorpusEntry make_rosenbrock(int n) {
  require_dimension(n, 2, "rosenbrock");
  CorpusEntry e;
  e.family = "rosenbrock";
  e.problem = std::make_shared<RosenbrockProblem>(n);
  e.name = e.problem->name();
  e.default_start = alternating(n, -1.2, 1.0);
  e.default_set = FeasibleSet::whole_space();
  e.meta.f_low = 0.0;
  e.meta.known_minimizer = Vector::Ones(n);

  // Coordinates of the level set {f <= f0}: (1 - x_i)^2 <= f0 for i < n-1 and
  // |x_{n-1}| <= x_{n-2}^2 + sqrt(f0/100).
  const double f0 = e.problem->value(e.default_start);
  const double a = 1.0 + std::sqrt(f0);
  const double R = std::max(a, a * a + std::sqrt(f0 / 100.0));
  // Per-term Frobenius bounds on the derivative tensors over [-R, R]^2; a
  // coordinate sits in at most two terms, hence the factor 2.
  const double hess = std::sqrt(std::pow(1200.0 * R * R + 400.0 * R + 2.0, 2) +
                                2.0 * std::pow(400.0 * R, 2) + 200.0 * 200.0);
  const double third = std::sqrt(std::pow(2400.0 * R, 2) + 3.0 * 400.0 * 400.0);
  const double grad = 400.0 * R * (R + R * R) + 2.0 * (1.0 + R) + 200.0 * (R + R * R);
  e.meta.smoothness = {{1, 1.0, 2.0 * hess, false},
                       {2, 1.0, 2.0 * third, false},
                       {3, 1.0, 2400.0, true},
                       {4, 1.0, 0.0, true}};
  e.meta.derivative_bounds =
      std::vector<double>{std::sqrt(static_cast<double>(n)) * grad, 2.0 * hess, 2.0 * third, 2400.0};
  return e;
}

CorpusEntry make_holder_power(double q, int n) {
  require_dimension(n, 1, "holder-power");
  const int max_order = holder_power_max_order(q);
  CorpusEntry e;
  e.family = "holder-power";
  e.name = fmt::format("holder-power({})", q);
  e.problem = std::make_shared<SeparableProblem>(
      e.name, n, max_order, [q](int order, double t) { return holder_profile(q, order, t); },
      Eigen::MatrixXd::Zero(n, n));
  e.default_start = alternating(n, 0.9, -0.6);
  e.default_set = FeasibleSet::whole_space();
  e.meta.f_low = 0.0;
  e.meta.known_minimizer = Vector::Zero(n);

  const double f0 = e.problem->value(e.default_start);
  const double R = std::pow(q * f0, 1.0 / q);
  std::vector<double> bounds;
  for (int j = 1; j <= max_order; ++j) {
    e.meta.smoothness.push_back(holder_power_smoothness(q, j, n, R));
    const double sup = sup_holder_derivative(q, j, R);
    bounds.push_back(j == 1 ? std::sqrt(static_cast<double>(n)) * sup : sup);
  }
  e.meta.derivative_bounds = bounds;
  return e;
}

CorpusEntry make_shifted_holder(double q, int n) {
  require_dimension(n, 1, "shifted-holder");
  const int max_order = holder_power_max_order(q);
  CorpusEntry e;
  e.family = "shifted-holder";
  e.name = fmt::format("shifted-holder({})", q);
  e.problem = std::make_shared<SeparableProblem>(
      e.name, n, max_order,
      [q](int order, double t) { return holder_profile(q, order, t) + cosine_profile(order, t); },
      Eigen::MatrixXd::Zero(n, n));
  e.default_start = alternating(n, 2.5, -1.5);
  e.default_set = FeasibleSet::whole_space();
  e.meta.f_low = 0.0;
  e.meta.known_minimizer = Vector::Zero(n);

  // Each term is nonnegative, so |x_i|^q / q <= f0 on the level set.
  const double f0 = e.problem->value(e.default_start);
  const double R = std::pow(q * f0, 1.0 / q);
  const double diameter = 2.0 * R * std::sqrt(static_cast<double>(n));
  std::vector<double> bounds;
  for (int j = 1; j <= max_order; ++j) {
    OrderSmoothness s = holder_power_smoothness(q, j, n, R);
    // The cosine part's order-j derivative is 1-Lipschitz per coordinate.
    s.holder_constant_unscaled += std::pow(diameter, 1.0 - s.beta);
    s.certified = false;
    e.meta.smoothness.push_back(s);
    const double sup = sup_holder_derivative(q, j, R) + 1.0;
    bounds.push_back(j == 1 ? std::sqrt(static_cast<double>(n)) * sup : sup);
  }
  e.meta.derivative_bounds = bounds;
  return e;
}

CorpusEntry make_quartic_valley(int n, double coupling) {
  require_dimension(n, 1, "quartic-valley");
  if (!(coupling >= 0.0)) throw std::invalid_argument("quartic-valley: coupling must be nonnegative");
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    C(i, i) += coupling;
    C(i + 1, i + 1) += coupling;
    C(i, i + 1) -= coupling;
    C(i + 1, i) -= coupling;
  }
  const double c_norm = 4.0 * coupling;
  auto profile = [](int order, double t) {
    switch (order) {
      case 0: return (t * t - 1.0) * (t * t - 1.0);
      case 1: return 4.0 * t * t * t - 4.0 * t;
      case 2: return 12.0 * t * t - 4.0;
      case 3: return 24.0 * t;
      default: return 24.0;
    }
  };
  CorpusEntry e;
  e.family = "quartic-valley";
  e.name = "quartic-valley";
  e.problem = std::make_shared<SeparableProblem>(e.name, n, 4, profile, C);
  Vector start(n);
  for (int i = 0; i < n; ++i) start[i] = std::array{0.5, -1.5, 0.25}[static_cast<size_t>(i % 3)];
  e.default_start = start;
  e.default_set = FeasibleSet::whole_space();
  e.meta.f_low = 0.0;
  e.meta.known_minimizer = Vector::Ones(n);

  // (x_i^2 - 1)^2 <= f0 on the level set.
  const double f0 = e.problem->value(start);
  const double R = std::sqrt(1.0 + std::sqrt(f0));
  const double hess = 12.0 * R * R + 4.0 + c_norm;
  e.meta.smoothness = {{1, 1.0, hess, false},
                       {2, 1.0, 24.0 * R, false},
                       {3, 1.0, 24.0, true},
                       {4, 1.0, 0.0, true}};
  e.meta.derivative_bounds = std::vector<double>{
      std::sqrt(static_cast<double>(n)) * (4.0 * R * R * R + 4.0 * R + c_norm * R), hess, 24.0 * R,
      24.0};
  return e;
}

std::vector<CorpusEntry> list_corpus() {
  std::vector<CorpusEntry> out;
  out.push_back(make_quadratic());
  out.push_back(make_rosenbrock(2));
  out.push_back(make_rosenbrock(4));
  out.push_back(make_holder_power(1.5));
  out.push_back(make_holder_power(2.5));
  out.push_back(make_holder_power(3.5));
  out.push_back(make_shifted_holder(1.5));
  out.push_back(make_shifted_holder(2.5));
  out.push_back(make_quartic_valley());
  return out;
}

CorpusEntry make_entry(const std::string& name, int n) {
  static const std::regex rosen(R"(rosenbrock(?:-(\d+))?)");
  static const std::regex holder(R"((holder-power|shifted-holder)\(([0-9.eE+-]+)\))");
  std::smatch m;
  if (name == "quadratic") return n > 0 ? make_quadratic(n) : make_quadratic();
  if (name == "quartic-valley") return n > 0 ? make_quartic_valley(n) : make_quartic_valley();
  if (std::regex_match(name, m, rosen)) {
    const int dim = n > 0 ? n : (m[1].matched ? std::stoi(m[1].str()) : 2);
    return make_rosenbrock(dim);
  }
  if (std::regex_match(name, m, holder)) {
    double q = 0.0;
    try {
      q = std::stod(m[2].str());
    } catch (const std::exception&) {
      throw std::invalid_argument(fmt::format("invalid exponent in '{}'", name));
    }
    const int dim = n > 0 ? n : 2;
    return m[1].str() == "holder-power" ? make_holder_power(q, dim) : make_shifted_holder(q, dim);
  }
  throw std::invalid_argument(fmt::format("unknown problem '{}'", name));
}

double empirical_holder_exponent(const Problem& problem, int order, const FeasibleSet::Box& region,
                                 int samples, std::uint64_t seed) {
  if (order < 1 || order > problem.max_order()) {
    throw std::out_of_range(fmt::format("empirical_holder_exponent: order {} not available", order));
  }
  if (samples < 100) throw std::invalid_argument("empirical_holder_exponent: need at least 100 samples");
  const int n = problem.dimension();
  if (region.lower.size() != n) throw std::invalid_argument("empirical_holder_exponent: region dimension");
  const auto set = FeasibleSet::box(region.lower, region.upper);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  auto random_unit = [&] {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    return Vector(v / v.norm());
  };
  const Vector direction = random_unit();
  auto derivative = [&](const Vector& x) {
    return order == 1 ? problem.gradient(x) : problem.derivative(order, x)->contract(direction);
  };

  const Vector middle = 0.5 * (region.lower + region.upper);
  const Vector half = 0.5 * (region.upper - region.lower);
  const double width = half.minCoeff();
  if (!(width > 0.0)) throw std::invalid_argument("empirical_holder_exponent: region must have interior");

  constexpr double kDecades = 5.0;
  constexpr int kBands = 20;
  std::array<double, kBands> best_diff{};
  std::array<double, kBands> best_dist{};
  std::array<bool, kBands> filled{};

  for (int k = 0; k < samples; ++k) {
    Vector center(n);
    for (int i = 0; i < n; ++i) {
      const double magnitude = std::pow(10.0, -6.0 * unit(rng));
      center[i] = middle[i] + (unit(rng) < 0.5 ? -1.0 : 1.0) * magnitude * half[i];
    }
    const double separation = width * std::pow(10.0, -kDecades * unit(rng));
    const Vector offset = 0.5 * separation * random_unit();
    const Vector x = set.project(center - offset);
    const Vector y = set.project(center + offset);
    const double dist = (x - y).norm();
    if (!(dist > 0.0)) continue;
    const double diff = (derivative(x) - derivative(y)).norm();
    if (!(diff > 1e-14)) continue;
    const double position = std::log10(width / dist) / kDecades;
    const int band = std::clamp(static_cast<int>(position * kBands), 0, kBands - 1);
    if (!filled[band] || diff > best_diff[band]) {
      filled[band] = true;
      best_diff[band] = diff;
      best_dist[band] = dist;
    }
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int b = 0; b < kBands; ++b) {
    if (!filled[b]) continue;
    const double lx = std::log(best_dist[b]);
    const double ly = std::log(best_diff[b]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) {
    throw DegenerateSamplesError(
        fmt::format("order-{} derivative differences of {} are below 1e-14 at every sampled scale",
                    order, problem.name()));
  }
  const double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

}  // namespace arp
