#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "pertfool/dataset.hpp"
#include "pertfool/errors.hpp"
#include "pertfool/network.hpp"

using namespace pertfool;

namespace {

Network single_layer(Matrix w, Vector b, Activation act) {
  return Network({Layer{std::move(w), std::move(b), act}});
}

Network compose(const Network& a, const Network& b) {
  std::vector<Layer> layers = a.layers();
  layers.insert(layers.end(), b.layers().begin(), b.layers().end());
  return Network(std::move(layers));
}

}  // namespace

TEST_CASE("activations and derivatives") {
  CHECK(activate(Activation::tanh, 0.0) == 0.0);
  CHECK(activate(Activation::sigmoid, 0.0) == 0.5);
  CHECK(activate(Activation::relu, -1.0) == 0.0);
  CHECK(activate(Activation::identity, -1.5) == -1.5);
  CHECK(activate_derivative(Activation::tanh, 0.0) == 1.0);
  CHECK(activate_derivative(Activation::sigmoid, 0.0) == 0.25);
  CHECK(activate_derivative(Activation::relu, 0.0) == 0.0);
  CHECK(activate_derivative(Activation::relu, 2.0) == 1.0);
  CHECK(activate_derivative(Activation::identity, 7.0) == 1.0);
  for (Activation a : {Activation::identity, Activation::tanh, Activation::sigmoid,
                       Activation::relu}) {
    CHECK(parse_activation(to_string(a)) == a);
  }
  CHECK_FALSE(parse_activation("softplus").has_value());
}

TEST_CASE("network construction validates the layer chain") {
  CHECK_THROWS_AS(Network({}), DimensionError);
  CHECK_THROWS_AS(single_layer(Matrix(2, 2), Vector{0}, Activation::identity), DimensionError);
  std::vector<Layer> bad{Layer{Matrix(3, 2), Vector(3), Activation::tanh},
                         Layer{Matrix(2, 4), Vector(2), Activation::identity}};
  CHECK_THROWS_AS(Network{bad}, DimensionError);
  const std::vector<std::size_t> dims{4, 5, 3};
  const Network net = make_network(dims, Activation::relu, Activation::identity, 1);
  CHECK(net.depth() == 2);
  CHECK(net.input_dim() == 4);
  CHECK(net.output_dim() == 3);
}

TEST_CASE("initialization is bounded by the fan-in/fan-out limit") {
  const std::vector<std::size_t> dims{20, 30};
  const Network net = make_network(dims, Activation::tanh, Activation::identity, 9);
  const double s = std::sqrt(6.0 / 50.0);
  for (double w : net.layers()[0].weights.entries()) CHECK(std::abs(w) <= s);
  for (double b : net.layers()[0].bias) CHECK(b == 0.0);
  CHECK(make_network(dims, Activation::tanh, Activation::identity, 9) == net);
  CHECK_FALSE(make_network(dims, Activation::tanh, Activation::identity, 10) == net);
}

TEST_CASE("forward examples") {
  const Network lin =
      single_layer(Matrix(2, 2, {2, 0, 0, 3}), Vector{0, 0}, Activation::identity);
  CHECK(forward(lin, Vector{1, 1}).output() == Vector{2, 3});
  const Network th = single_layer(Matrix(2, 2, {1, 2, 3, 4}), Vector{0, 0}, Activation::tanh);
  CHECK(forward(th, Vector{0, 0}).output() == Vector{0, 0});
  CHECK_THROWS_AS(forward(lin, Vector{1}), DimensionError);

  oracle::BallSampler s(1);
  const Network net = oracle::random_network(s, {3, 4, 2}, Activation::sigmoid);
  const Vector x{0.1, -0.3, 0.9};
  const ForwardTrace a = forward(net, x), b = forward(net, x);
  CHECK(a.preacts == b.preacts);
  CHECK(a.activations == b.activations);
  REQUIRE(a.preacts.size() == 2);
  for (std::size_t l = 0; l < 2; ++l) {
    for (std::size_t i = 0; i < a.preacts[l].size(); ++i) {
      CHECK(a.activations[l][i] == activate(Activation::sigmoid, a.preacts[l][i]));
    }
  }
}

TEST_CASE("jacobian examples") {
  const Matrix w(2, 3, {1, -2, 0.5, 3, 0, -1});
  const Network lin = single_layer(w, Vector{1, 2}, Activation::identity);
  CHECK(jacobian(lin, Vector{4, 5, 6}) == w);
  const Network th = single_layer(w, Vector{0, 0}, Activation::tanh);
  CHECK(jacobian(th, Vector{0, 0, 0}) == w);
}

TEST_CASE("jacobian matches finite differences for every activation") {
  oracle::BallSampler s(2);
  for (Activation act : {Activation::tanh, Activation::sigmoid, Activation::identity}) {
    for (int trial = 0; trial < 30; ++trial) {
      const Network net = oracle::random_network(s, {3, 5, 4, 2}, act);
      const Vector x = s.gaussian(3);
      const auto f = [&](std::span<const double> v) { return forward(net, v).output(); };
      CHECK(oracle::matrix_rel_error(jacobian(net, x), finite_diff_jacobian(f, x)) < 1e-4);
    }
  }
  // relu away from kinks
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = oracle::random_network(s, {3, 6, 2}, Activation::relu);
    const Vector x = s.gaussian(3);
    const ForwardTrace t = forward(net, x);
    bool near_kink = false;
    for (const auto& z : t.preacts)
      for (double v : z) near_kink |= std::abs(v) < 1e-3;
    if (near_kink) continue;
    const auto f = [&](std::span<const double> v) { return forward(net, v).output(); };
    CHECK(oracle::matrix_rel_error(jacobian(net, t), finite_diff_jacobian(f, x)) < 1e-4);
  }
}

TEST_CASE("jacobian of a composition is the product of jacobians") {
  oracle::BallSampler s(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Network a = oracle::random_network(s, {3, 4}, Activation::tanh);
    const Network b = oracle::random_network(s, {4, 5, 2}, Activation::sigmoid);
    const Vector x = s.gaussian(3);
    const Vector ax = forward(a, x).output();
    const Matrix expected = matmul(jacobian(b, ax), jacobian(a, x));
    const Matrix got = jacobian(compose(a, b), x);
    for (std::size_t i = 0; i < got.entries().size(); ++i) {
      CHECK(std::abs(got.entries()[i] - expected.entries()[i]) < 1e-10);
    }
  }
}

TEST_CASE("linear networks have no first-order error") {
  oracle::BallSampler s(4);
  const Network net = oracle::random_network(s, {4, 3, 2}, Activation::identity);
  const Vector x = s.gaussian(4), d = s.gaussian(4);
  const Vector diff = subtract(forward(net, add(x, d)).output(), forward(net, x).output());
  const Vector lin = matvec(jacobian(net, x), d);
  for (std::size_t i = 0; i < diff.size(); ++i) CHECK(std::abs(diff[i] - lin[i]) < 1e-12);
}

TEST_CASE("first-order remainder vanishes faster than the perturbation") {
  oracle::BallSampler s(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Network net = oracle::random_network(s, {3, 4, 2}, Activation::tanh);
    const Vector x = s.gaussian(3);
    Vector dir = s.gaussian(3);
    dir = scaled(dir, 1.0 / pnorm(dir, NormExponent(2)));
    const Matrix j = jacobian(net, x);
    auto ratio = [&](double size) {
      const Vector d = scaled(dir, size);
      const Vector r = subtract(subtract(forward(net, add(x, d)).output(), forward(net, x).output()),
                                matvec(j, d));
      return pnorm(r, NormExponent(2)) / size;
    };
    CHECK(ratio(1e-6) < 1e-3 * ratio(1e-2));
  }
}

TEST_CASE("vector-jacobian product equals J^T u") {
  oracle::BallSampler s(6);
  const Network net = oracle::random_network(s, {5, 4, 3}, Activation::tanh);
  const Vector x = s.gaussian(5), u = s.gaussian(3);
  const ForwardTrace t = forward(net, x);
  const Vector a = vector_jacobian_product(net, t, u);
  const Vector b = matvec_transposed(jacobian(net, t), u);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  CHECK_THROWS_AS(vector_jacobian_product(net, t, Vector{1}), DimensionError);
}

TEST_CASE("softmax examples and invariants") {
  CHECK(softmax(Vector{0, 0}) == Vector{0.5, 0.5});
  CHECK(softmax(Vector{10, 0, 0})[0] > 0.99);
  const Vector big = softmax(Vector{1000, 0});
  CHECK(big[0] == 1.0);
  CHECK(std::isfinite(big[1]));
  oracle::BallSampler s(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector z = s.gaussian(1 + trial % 6, 5.0);
    const Vector p = softmax(z);
    double sum = 0.0;
    for (double v : p) {
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
    const double c = s.uniform_scalar(-50, 50);
    Vector shifted = z;
    for (double& v : shifted) v += c;
    const Vector q = softmax(shifted);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - q[i]) < 1e-12);
    CHECK(argmax(p) == argmax(z));
  }
}

TEST_CASE("classify uses argmax with the lowest index on ties") {
  const Network tie = single_layer(Matrix(2, 1, {1, 1}), Vector{0, 0}, Activation::identity);
  CHECK(classify(tie, Vector{1}) == 0);
  const Network three =
      single_layer(Matrix(3, 1, {0, 0, 0}), Vector{std::log(0.1), std::log(0.7), std::log(0.2)},
                   Activation::identity);
  CHECK(classify(three, Vector{0}) == 1);
  CHECK_THROWS_AS(classify(three, Vector{0, 1}), DimensionError);
}

TEST_CASE("proxy evaluation") {
  oracle::BallSampler s(8);
  const Network net = oracle::random_network(s, {3, 4, 3}, Activation::tanh);
  const Vector x = s.gaussian(3);
  for (Proxy proxy : {Proxy::softmax, Proxy::logits}) {
    CHECK(parse_proxy(to_string(proxy)) == proxy);
    const ProxyEvaluation e = evaluate_proxy(net, x, proxy);
    CHECK(e.values == proxy_values(net, x, proxy));
    const auto f = [&](std::span<const double> v) { return proxy_values(net, v, proxy); };
    CHECK(oracle::matrix_rel_error(e.jacobian, finite_diff_jacobian(f, x)) < 1e-6);
    for (Label k = 0; k < 3; ++k) {
      const Vector g = proxy_component_gradient(net, x, k, proxy);
      for (std::size_t i = 0; i < 3; ++i) CHECK(g[i] == doctest::Approx(e.jacobian(k, i)));
    }
  }
  CHECK(proxy_values(net, x, Proxy::softmax) == softmax(forward(net, x).output()));
  CHECK_FALSE(parse_proxy("probabilities").has_value());
  CHECK_THROWS_AS(proxy_component_gradient(net, x, 3, Proxy::softmax), DomainError);
}

TEST_CASE("cross entropy examples") {
  const Network confident =
      single_layer(Matrix(2, 1, {0, 0}), Vector{10, -10}, Activation::identity);
  CHECK(cross_entropy_grad(confident, Vector{0}, 0).loss < 1e-4);
  const Network uniform = single_layer(Matrix(4, 1, 0.0), Vector(4, 0.0), Activation::identity);
  CHECK(cross_entropy_grad(uniform, Vector{0.3}, 2).loss == doctest::Approx(std::log(4.0)));
  CHECK_THROWS_AS(cross_entropy_grad(uniform, Vector{0.3}, 4), DomainError);
  CHECK_THROWS_AS(cross_entropy_grad(uniform, Vector{0.3, 1}, 0), DimensionError);
}

TEST_CASE("cross entropy gradient matches finite differences") {
  oracle::BallSampler s(9);
  for (Activation act : {Activation::tanh, Activation::sigmoid, Activation::identity,
                         Activation::relu}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Network net = oracle::random_network(s, {4, 5, 3}, act);
      const Vector x = s.gaussian(4);
      if (act == Activation::relu) {
        bool near_kink = false;
        for (const auto& z : forward(net, x).preacts)
          for (double v : z) near_kink |= std::abs(v) < 1e-3;
        if (near_kink) continue;
      }
      const Label y = trial % 3;
      const auto lossfn = [&](std::span<const double> v) {
        return Vector{cross_entropy_grad(net, v, y).loss};
      };
      const Matrix fd = finite_diff_jacobian(lossfn, x);
      const Matrix an(1, 4, cross_entropy_grad(net, x, y).grad);
      CHECK(oracle::matrix_rel_error(an, fd) < 1e-4);
    }
  }
}

TEST_CASE("training separates two blobs") {
  BlobParams bp;
  bp.classes = 2;
  bp.dim = 2;
  bp.samples = 400;
  bp.separation = 6.0;
  const Dataset data = make_blobs(bp, 11);
  const std::vector<std::size_t> dims{2, 2};
  const Network init = make_network(dims, Activation::identity, Activation::identity, 3);
  TrainConfig cfg(3);
  cfg.epochs = 50;
  std::size_t calls = 0;
  const Network net = train_sgd(init, data, cfg, [&](std::size_t, double loss) {
    ++calls;
    CHECK(std::isfinite(loss));
  });
  CHECK(calls == 50);
  CHECK(accuracy(net, data) >= 0.99);
}

TEST_CASE("training edge cases") {
  BlobParams bp;
  bp.samples = 64;
  const Dataset data = make_blobs(bp, 1);
  const std::vector<std::size_t> dims{2, 3, 2};
  const Network init = make_network(dims, Activation::tanh, Activation::identity, 5);

  TrainConfig zero(1);
  zero.epochs = 0;
  CHECK(train_sgd(init, data, zero) == init);

  TrainConfig cfg(17);
  cfg.epochs = 3;
  CHECK(train_sgd(init, data, cfg) == train_sgd(init, data, cfg));
  TrainConfig other(18);
  other.epochs = 3;
  CHECK_FALSE(train_sgd(init, data, cfg) == train_sgd(init, data, other));

  CHECK_THROWS_AS(train_sgd(init, Dataset{}, cfg), PreconditionError);
  Dataset badlabel = data;
  badlabel.labels[0] = 5;
  CHECK_THROWS_AS(train_sgd(init, badlabel, cfg), DomainError);

  TrainConfig wild(2);
  wild.learning_rate = 1e300;
  wild.epochs = 5;
  const Network linear = make_network(dims, Activation::identity, Activation::identity, 5);
  CHECK_THROWS_AS(train_sgd(linear, data, wild), TrainingError);
}
