#pragma once

// Dense linear algebra, lp norms and their dual maximizers, a dominant
// eigenpair solver and a finite-difference Jacobian used by the tests.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace pertfool {

using Vector = std::vector<double>;
using Label = std::size_t;

/// Row-major dense matrix.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  Vector column(std::size_t c) const;

  const std::vector<double>& entries() const noexcept { return data_; }
  std::vector<double>& entries() noexcept { return data_; }

  Matrix transposed() const;

  bool operator==(const Matrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Vector matvec(const Matrix& a, std::span<const double> x);
/// a^T y without forming the transpose.
Vector matvec_transposed(const Matrix& a, std::span<const double> y);
Matrix matmul(const Matrix& a, const Matrix& b);
/// a^T a.
Matrix gram(const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);
bool all_finite(std::span<const double> v);
bool is_zero(std::span<const double> v);

/// Exponent of an lp norm: a real p >= 1 or infinity.
class NormExponent {
public:
  explicit NormExponent(double p);
  static NormExponent infinity();

  /// Accepts "inf", "infinity" or a decimal number >= 1.
  static NormExponent parse(const std::string& text);

  bool is_infinite() const noexcept;
  double value() const noexcept { return p_; }
  std::string to_string() const;

  bool operator==(const NormExponent&) const = default;

private:
  double p_;
};

double pnorm(std::span<const double> v, NormExponent p);

/// q with 1/p + 1/q = 1.
NormExponent dual_exponent(NormExponent p);

/// sign(0) == 0.
inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Index of the largest entry, lowest index on ties.
std::size_t argmax(std::span<const double> v);
/// Index of the largest magnitude, lowest index on ties.
std::size_t argmax_abs(std::span<const double> v);

struct DualMaximizer {
  Vector v;
  double value = 0.0;
};

/// Maximizes v.g over the ball ||v||_p <= eps. The maximum is eps*||g||_q.
/// For p == 1 all the budget goes to the largest |g_i| (lowest index on ties).
DualMaximizer dual_maximizer(std::span<const double> g, NormExponent p, double eps);

/// Maps eta into the lp ball of radius eps. Exact Euclidean projection for
/// p in {1, 2, inf}; other exponents are rescaled radially.
Vector project_to_ball(std::span<const double> eta, NormExponent p, double eps);

struct PowerIterationOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 1000;
  double residual_bound = 1e-8;
  std::uint64_t seed = 0;
};

struct EigenPair {
  double value = 0.0;
  Vector vector;
  std::size_t iterations = 0;
};

/// Dominant eigenpair of a symmetric positive semidefinite matrix.
/// Throws DimensionError for non-square input and ConvergenceError when the
/// relative residual ||Av - lambda v|| / lambda stays above the bound.
EigenPair power_iteration(const Matrix& a, const PowerIterationOptions& opts = {});

using VectorFunction = std::function<Vector(std::span<const double>)>;

/// Central-difference Jacobian, one column per input coordinate.
Matrix finite_diff_jacobian(const VectorFunction& fn, std::span<const double> x,
                            double h = 1e-5);

/// Seeded generator with platform-independent output. Standard library
/// distributions are implementation-defined, so the transforms live here.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal();
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace pertfool
