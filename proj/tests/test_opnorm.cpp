#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "pertfool/errors.hpp"
#include "pertfool/opnorm.hpp"

using namespace pertfool;

namespace {

const NormExponent kInfP = NormExponent::infinity();

Matrix random_matrix(oracle::BallSampler& s, std::size_t r, std::size_t c) {
  return Matrix(r, c, s.gaussian(r * c));
}

}  // namespace

TEST_CASE("regression objective") {
  CHECK(regression_objective(Matrix::identity(2), Vector{3, 4}) == doctest::Approx(5.0));
  CHECK(regression_objective(Matrix::identity(2), Vector{0, 0}) == 0.0);
  const Matrix j(2, 2, {1, 2, -1, 0.5});
  const Vector eta{0.3, -0.7};
  CHECK(regression_objective(j, scaled(eta, -2.5)) ==
        doctest::Approx(2.5 * regression_objective(j, eta)));
  CHECK_THROWS_AS(regression_objective(j, Vector{1}), DimensionError);
}

TEST_CASE("l2 attack examples") {
  const RegressionAttackResult d = attack_l2(Matrix::diagonal(Vector{1, 3}), 0.5);
  CHECK(d.output_gain == doctest::Approx(1.5));
  CHECK(std::abs(d.eta[1]) == doctest::Approx(0.5));
  CHECK(std::abs(d.eta[0]) < 1e-6);
  CHECK(d.exact);
  const RegressionAttackResult id = attack_l2(Matrix::identity(3), 0.2);
  CHECK(id.output_gain == doctest::Approx(0.2));
  CHECK(pnorm(id.eta, NormExponent(2)) == doctest::Approx(0.2));
  CHECK(attack_l2(Matrix(2, 2, 0.0), 0.2).degenerate);
  CHECK_THROWS_AS(attack_l2(Matrix::identity(2), 0.0), PreconditionError);
  CHECK_THROWS_AS(attack_l2(Matrix::identity(2), oracle::kInf), PreconditionError);
}

TEST_CASE("l2 attack matches the singular value oracle") {
  oracle::BallSampler s(1);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix j = random_matrix(s, 2 + trial % 5, 2 + (trial / 5) % 5);
    const double eps = s.uniform_scalar(0.01, 2.0);
    const RegressionAttackResult r = attack_l2(j, eps);
    CHECK(r.output_gain == doctest::Approx(eps * oracle::spectral_norm(j)).epsilon(1e-6));
    CHECK(r.opnorm_estimate == doctest::Approx(oracle::spectral_norm(j)).epsilon(1e-6));
    CHECK(pnorm(r.eta, NormExponent(2)) <= eps * (1 + 1e-12));
  }
}

TEST_CASE("l1 attack is a single pixel attack") {
  const Matrix j(2, 2, {1, 0, 0, 3});
  const RegressionAttackResult r = attack_l1(j, 0.1);
  CHECK(r.eta == Vector{0, 0.1});
  CHECK(r.output_gain == doctest::Approx(0.3));
  const RegressionAttackResult tie = attack_l1(Matrix(2, 2, {1, 1, 1, 1}), 0.1);
  CHECK(tie.eta == Vector{0.1, 0});
  const RegressionAttackResult zero = attack_l1(Matrix(2, 3, 0.0), 0.1);
  CHECK(zero.eta == Vector{0.1, 0, 0});
  CHECK(zero.output_gain == 0.0);
  CHECK(zero.degenerate);

  oracle::BallSampler s(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_matrix(s, 6, 6);
    const RegressionAttackResult best = attack_l1(m, 0.3);
    std::size_t nonzero = 0;
    for (double v : best.eta) nonzero += v != 0.0;
    CHECK(nonzero == 1);
    for (std::size_t i = 0; i < 6; ++i) {
      Vector e(6, 0.0);
      e[i] = -0.3;
      CHECK(regression_objective(m, e) <= best.output_gain);
    }
    for (int k = 0; k < 2000; ++k) {
      CHECK(regression_objective(m, s.uniform(6, 1.0, 0.3)) <= best.output_gain + 1e-12);
    }
  }
}

TEST_CASE("l-inf brute force examples") {
  const RegressionAttackResult r = attack_linf_bruteforce(Matrix(2, 2, {1, -1, 1, 1}), 1.0);
  CHECK(r.output_gain == doctest::Approx(2.0));
  CHECK(r.eta == Vector{1, 1});
  const RegressionAttackResult d = attack_linf_bruteforce(Matrix::diagonal(Vector{1, 2, 2}), 0.5);
  CHECK(d.output_gain == doctest::Approx(0.5 * 3.0));
  CHECK(d.eta == Vector{0.5, 0.5, 0.5});
  CHECK_THROWS_AS(attack_linf_bruteforce(Matrix(1, 17, 1.0), 1.0), SizeError);
  CHECK_THROWS_AS(attack_linf_bruteforce(Matrix(1, 5, 1.0), 1.0, 4), SizeError);
  CHECK(attack_linf_bruteforce(Matrix(1, 17, 1.0), 1.0, 17).output_gain ==
        doctest::Approx(17.0));
}

TEST_CASE("ball inclusion ordering and brute-force optimality") {
  oracle::BallSampler s(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix j = random_matrix(s, 1 + trial % 6, 1 + trial % 8);
    const double eps = s.uniform_scalar(0.05, 1.0);
    const double g_inf = attack_linf_bruteforce(j, eps).output_gain;
    const double g_two = attack_l2(j, eps).output_gain;
    const double g_one = attack_l1(j, eps).output_gain;
    CHECK(g_inf >= g_two - 1e-9);
    CHECK(g_two >= g_one - 1e-9);
    CHECK(g_inf == doctest::Approx(oracle::linf_gain(j, eps)).epsilon(1e-12));
    for (int k = 0; k < 1000; ++k) {
      CHECK(regression_objective(j, s.uniform(j.cols(), oracle::kInf, eps)) <= g_inf + 1e-12);
    }
  }
}

TEST_CASE("regression attack on a network") {
  oracle::BallSampler s(4);
  const Network net = oracle::random_network(s, {4, 5, 3}, Activation::tanh);
  const Vector x = s.gaussian(4);
  const Matrix j = jacobian(net, x);
  CHECK(regression_attack(net, x, NormExponent(1), 0.1).eta == attack_l1(j, 0.1).eta);
  CHECK(regression_attack(net, x, NormExponent(2), 0.1).output_gain ==
        doctest::Approx(attack_l2(j, 0.1).output_gain));
  CHECK(regression_attack(net, x, kInfP, 0.1).output_gain ==
        doctest::Approx(oracle::linf_gain(j, 0.1)));
  CHECK_THROWS_AS(regression_attack(net, x, NormExponent(3), 0.1), PreconditionError);
  CHECK_THROWS_AS(regression_attack(net, x, kInfP, 0.1, 3), SizeError);
}
