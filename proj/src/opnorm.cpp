#include "pertfool/opnorm.hpp"

#include <cmath>

#include "pertfool/errors.hpp"

namespace pertfool {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw PreconditionError("regression attack: eps must be finite and > 0");
  }
}

RegressionAttackResult finish(const Matrix& j, Vector eta, double eps) {
  RegressionAttackResult out;
  out.output_gain = regression_objective(j, eta);
  out.opnorm_estimate = out.output_gain / eps;
  out.eta = std::move(eta);
  return out;
}

}  // namespace

double regression_objective(const Matrix& j, std::span<const double> eta) {
  const Vector y = matvec(j, eta);
  return y.empty() ? 0.0 : pnorm(y, NormExponent(2.0));
}

RegressionAttackResult attack_l2(const Matrix& j, double eps, std::uint64_t seed) {
  check_eps(eps);
  if (j.cols() == 0) throw DimensionError("attack_l2: empty Jacobian");
  PowerIterationOptions opts;
  opts.seed = seed;
  // nearly equal top singular values converge slowly; iterations are cheap
  opts.max_iterations = 100000;
  const EigenPair top = power_iteration(gram(j), opts);
  auto out = finish(j, scaled(top.vector, eps), eps);
  out.degenerate = top.value == 0.0;
  return out;
}

RegressionAttackResult attack_l1(const Matrix& j, double eps) {
  check_eps(eps);
  if (j.cols() == 0) throw DimensionError("attack_l1: empty Jacobian");
  const NormExponent two(2.0);
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t c = 0; c < j.cols(); ++c) {
    const Vector col = j.column(c);
    const double n = col.empty() ? 0.0 : pnorm(col, two);
    if (n > best_norm) {
      best_norm = n;
      best = c;
    }
  }
  Vector eta(j.cols(), 0.0);
  eta[best] = eps;
  auto out = finish(j, std::move(eta), eps);
  out.degenerate = best_norm == 0.0;
  return out;
}

RegressionAttackResult attack_linf_bruteforce(const Matrix& j, double eps,
                                              std::size_t max_dim) {
  check_eps(eps);
  const std::size_t n = j.cols();
  if (n == 0) throw DimensionError("attack_linf_bruteforce: empty Jacobian");
  if (n > max_dim || n >= 63) {
    throw SizeError("attack_linf_bruteforce: " + std::to_string(n) +
                    " inputs exceed the enumeration limit of " + std::to_string(max_dim) +
                    "; the l-inf -> l2 operator norm is NP-hard to compute in general");
  }
  const std::uint64_t vertices = std::uint64_t{1} << n;
  std::uint64_t best_index = 0;
  double best_gain = -1.0;
  Vector s(n);
  for (std::uint64_t v = 0; v < vertices; ++v) {
    for (std::size_t i = 0; i < n; ++i) s[i] = (v >> i) & 1u ? -1.0 : 1.0;
    const double gain = regression_objective(j, s);
    if (gain > best_gain) {
      best_gain = gain;
      best_index = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) s[i] = (best_index >> i) & 1u ? -eps : eps;
  auto out = finish(j, std::move(s), eps);
  out.degenerate = best_gain == 0.0;
  return out;
}

RegressionAttackResult regression_attack(const Network& net, std::span<const double> x,
                                         NormExponent p, double eps, std::size_t max_dim) {
  const Matrix j = jacobian(net, x);
  if (p.is_infinite()) return attack_linf_bruteforce(j, eps, max_dim);
  if (p.value() == 1.0) return attack_l1(j, eps);
  if (p.value() == 2.0) return attack_l2(j, eps);
  throw PreconditionError("regression attack: p must be 1, 2 or inf, got " + p.to_string());
}

}  // namespace pertfool
