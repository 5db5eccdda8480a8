#include "pertfool/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pertfool/errors.hpp"

namespace pertfool {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix: " + std::to_string(rows_) + "x" +
                         std::to_string(cols_) + " needs " +
                         std::to_string(rows_ * cols_) + " entries, got " +
                         std::to_string(data_.size()));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw DimensionError("matvec: matrix has " + std::to_string(a.cols()) +
                         " columns, vector has " + std::to_string(x.size()));
  }
  Vector y(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> y) {
  if (a.rows() != y.size()) {
    throw DimensionError("matvec_transposed: matrix has " +
                         std::to_string(a.rows()) + " rows, vector has " +
                         std::to_string(y.size()));
  }
  Vector x(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    const double yr = y[r];
    if (yr == 0.0) continue;
    for (std::size_t c = 0; c < row.size(); ++c) x[c] += row[c] * yr;
  }
  return x;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) +
                         " and " + std::to_string(b.rows()) + " differ");
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix gram(const Matrix& a) {
  Matrix g(a.cols(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      if (row[i] == 0.0) continue;
      for (std::size_t j = 0; j < a.cols(); ++j) g(i, j) += row[i] * row[j];
    }
  }
  return g;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()) + " differ");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("add: length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("subtract: length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector scaled(std::span<const double> a, double s) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
  return out;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool is_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

// ---------------------------------------------------------------------------

NormExponent::NormExponent(double p) : p_(p) {
  if (!(p >= 1.0)) {
    throw DomainError("norm exponent must be >= 1, got " + std::to_string(p));
  }
}

NormExponent NormExponent::infinity() {
  return NormExponent(std::numeric_limits<double>::infinity());
}

NormExponent NormExponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError("norm exponent: cannot parse '" + text + "'");
  }
  if (used != text.size()) {
    throw ParseError("norm exponent: trailing characters in '" + text + "'");
  }
  return NormExponent(p);
}

bool NormExponent::is_infinite() const noexcept { return std::isinf(p_); }

std::string NormExponent::to_string() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os << p_;
  return os.str();
}

double pnorm(std::span<const double> v, NormExponent p) {
  if (v.empty()) throw DimensionError("pnorm: empty vector");
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (p.is_infinite() || m == 0.0) return m;
  if (p.value() == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  // factor out the largest magnitude so the powers cannot overflow
  double s = 0.0;
  if (p.value() == 2.0) {
    for (double x : v) {
      const double r = x / m;
      s += r * r;
    }
    return m * std::sqrt(s);
  }
  for (double x : v) s += std::pow(std::abs(x) / m, p.value());
  return m * std::pow(s, 1.0 / p.value());
}

NormExponent dual_exponent(NormExponent p) {
  if (p.is_infinite()) return NormExponent(1.0);
  if (p.value() == 1.0) return NormExponent::infinity();
  return NormExponent(p.value() / (p.value() - 1.0));
}

std::size_t argmax(std::span<const double> v) {
  if (v.empty()) throw DimensionError("argmax: empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

std::size_t argmax_abs(std::span<const double> v) {
  if (v.empty()) throw DimensionError("argmax_abs: empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  return best;
}

DualMaximizer dual_maximizer(std::span<const double> g, NormExponent p, double eps) {
  if (!(eps >= 0.0)) throw PreconditionError("dual_maximizer: eps must be >= 0");
  DualMaximizer out{Vector(g.size(), 0.0), 0.0};
  if (g.empty()) throw DimensionError("dual_maximizer: empty gradient");
  if (is_zero(g) || eps == 0.0) return out;

  const NormExponent q = dual_exponent(p);
  if (p.is_infinite()) {
    for (std::size_t i = 0; i < g.size(); ++i) out.v[i] = eps * sign(g[i]);
  } else if (p.value() == 1.0) {
    const std::size_t i = argmax_abs(g);
    out.v[i] = eps * sign(g[i]);
  } else {
    const double gq = pnorm(g, q);
    const double expo = q.value() - 1.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      out.v[i] = eps * sign(g[i]) * std::pow(std::abs(g[i]) / gq, expo);
    }
  }
  out.value = eps * pnorm(g, q);
  return out;
}

Vector project_to_ball(std::span<const double> eta, NormExponent p, double eps) {
  Vector out(eta.begin(), eta.end());
  if (eta.empty()) return out;
  if (p.is_infinite()) {
    for (double& x : out) x = std::clamp(x, -eps, eps);
    return out;
  }
  const double norm = pnorm(eta, p);
  if (norm <= eps) return out;
  if (eps <= 0.0) return Vector(eta.size(), 0.0);
  if (p.value() == 1.0) {
    // soft-threshold at the level that lands exactly on the simplex boundary
    std::vector<double> mags(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) mags[i] = std::abs(eta[i]);
    std::sort(mags.begin(), mags.end(), std::greater<>());
    double cumsum = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < mags.size(); ++j) {
      cumsum += mags[j];
      const double t = (cumsum - eps) / static_cast<double>(j + 1);
      if (mags[j] - t > 0.0) theta = t;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = sign(eta[i]) * std::max(std::abs(eta[i]) - theta, 0.0);
    }
    return out;
  }
  const double s = eps / norm;
  for (double& x : out) x *= s;
  return out;
}

EigenPair power_iteration(const Matrix& a, const PowerIterationOptions& opts) {
  const std::size_t n = a.rows();
  if (n != a.cols() || n == 0) {
    throw DimensionError("power_iteration: expected a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  const NormExponent two(2.0);

  Rng rng(opts.seed);
  Vector v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  double nv = pnorm(v, two);
  if (nv == 0.0) {
    v.assign(n, 0.0);
    v[0] = 1.0;
    nv = 1.0;
  }
  for (double& x : v) x /= nv;

  EigenPair result;
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    Vector w = matvec(a, v);
    const double nw = pnorm(w, two);
    result.iterations = it;
    if (nw == 0.0) break;  // v is in the null space; eigenvalue 0
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] /= nw;
      const double d = w[i] - v[i];
      change += d * d;
    }
    v = std::move(w);
    if (std::sqrt(change) < opts.tolerance) break;
  }

  const Vector av = matvec(a, v);
  const double lambda = dot(v, av);
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = av[i] - lambda * v[i];
    residual += d * d;
  }
  residual = std::sqrt(residual);
  const double scale = std::abs(lambda) > 0.0 ? std::abs(lambda) : 1.0;
  if (!(residual / scale < opts.residual_bound)) {
    throw ConvergenceError("power_iteration: relative residual " +
                               std::to_string(residual / scale) + " after " +
                               std::to_string(result.iterations) + " iterations",
                           v);
  }
  result.value = lambda;
  result.vector = std::move(v);
  return result;
}

Matrix finite_diff_jacobian(const VectorFunction& fn, std::span<const double> x,
                            double h) {
  if (!(h > 0.0)) throw PreconditionError("finite_diff_jacobian: h must be > 0");
  Vector probe(x.begin(), x.end());
  Matrix jac;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const Vector plus = fn(probe);
    probe[i] = x[i] - h;
    const Vector minus = fn(probe);
    probe[i] = x[i];
    if (plus.size() != minus.size()) {
      throw DimensionError("finite_diff_jacobian: output size changed");
    }
    if (i == 0) jac = Matrix(plus.size(), x.size());
    for (std::size_t r = 0; r < plus.size(); ++r) {
      jac(r, i) = (plus[r] - minus[r]) / (2.0 * h);
    }
  }
  return jac;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw PreconditionError("Rng::below: n must be > 0");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r = engine_();
  while (r >= limit) r = engine_();
  return static_cast<std::size_t>(r % bound);
}

}  // namespace pertfool
