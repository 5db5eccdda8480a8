#pragma once

// Regression attacks: maximize ||J eta||_2 subject to ||eta||_p <= eps. The
// optimum is eps * ||J||_{p->2}, reached on the boundary of the ball.
//   p = 2    eps times the top right singular vector of J
//   p = 1    eps on the single largest-norm column ("single pixel")
//   p = inf  NP-hard in general; exact vertex enumeration for small inputs

#include <span>

#include "pertfool/network.hpp"
#include "pertfool/numeric.hpp"

namespace pertfool {

struct RegressionAttackResult {
  Vector eta;
  double output_gain = 0.0;      // ||J eta||_2
  double opnorm_estimate = 0.0;  // output_gain / eps
  bool exact = true;
  bool degenerate = false;  // J == 0, every direction gains nothing
};

double regression_objective(const Matrix& j, std::span<const double> eta);

RegressionAttackResult attack_l2(const Matrix& j, double eps, std::uint64_t seed = 0);
RegressionAttackResult attack_l1(const Matrix& j, double eps);

inline constexpr std::size_t kDefaultBruteForceDim = 16;

/// Enumerates all 2^cols sign vectors; vertex index bit i set means
/// s_i = -1, and the lowest index wins ties. Throws SizeError when
/// cols > max_dim.
RegressionAttackResult attack_linf_bruteforce(const Matrix& j, double eps,
                                              std::size_t max_dim = kDefaultBruteForceDim);

/// First-order attack on a network's raw output at x (J evaluated once).
/// p must be 1, 2 or inf.
RegressionAttackResult regression_attack(const Network& net, std::span<const double> x,
                                         NormExponent p, double eps,
                                         std::size_t max_dim = kDefaultBruteForceDim);

}  // namespace pertfool
