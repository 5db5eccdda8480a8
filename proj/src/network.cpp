#include "pertfool/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pertfool/errors.hpp"

namespace pertfool {

double activate(Activation act, double z) {
  switch (act) {
    case Activation::identity: return z;
    case Activation::tanh: return std::tanh(z);
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::relu: return z > 0.0 ? z : 0.0;
  }
  return z;
}

double activate_derivative(Activation act, double z) {
  switch (act) {
    case Activation::identity: return 1.0;
    case Activation::tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Activation::sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 - s);
    }
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::identity: return "identity";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    case Activation::relu: return "relu";
  }
  return "identity";
}

std::optional<Activation> parse_activation(std::string_view name) {
  for (Activation a : {Activation::identity, Activation::tanh, Activation::sigmoid,
                       Activation::relu}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw DimensionError("network: at least one layer required");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    if (layer.bias.size() != layer.outputs()) {
      throw DimensionError("network: layer " + std::to_string(l) + " has " +
                           std::to_string(layer.outputs()) + " rows but bias of length " +
                           std::to_string(layer.bias.size()));
    }
    if (layer.outputs() == 0 || layer.inputs() == 0) {
      throw DimensionError("network: layer " + std::to_string(l) + " is empty");
    }
    if (l > 0 && layer.inputs() != layers_[l - 1].outputs()) {
      throw DimensionError("network: layer " + std::to_string(l) + " expects " +
                           std::to_string(layer.inputs()) + " inputs but layer " +
                           std::to_string(l - 1) + " produces " +
                           std::to_string(layers_[l - 1].outputs()));
    }
  }
}

Network make_network(std::span<const std::size_t> dims, Activation hidden,
                     Activation output, std::uint64_t seed) {
  if (dims.size() < 2) throw DimensionError("make_network: need input and output sizes");
  Rng rng(seed);
  std::vector<Layer> layers;
  for (std::size_t l = 1; l < dims.size(); ++l) {
    const std::size_t in = dims[l - 1];
    const std::size_t out = dims[l];
    const double s = std::sqrt(6.0 / static_cast<double>(in + out));
    Matrix w(out, in);
    for (double& x : w.entries()) x = rng.uniform(-s, s);
    layers.push_back(Layer{std::move(w), Vector(out, 0.0),
                           l + 1 == dims.size() ? output : hidden});
  }
  return Network(std::move(layers));
}

ForwardTrace forward(const Network& net, std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw DimensionError("forward: network expects " + std::to_string(net.input_dim()) +
                         " inputs, got " + std::to_string(x.size()));
  }
  ForwardTrace trace;
  trace.input.assign(x.begin(), x.end());
  trace.preacts.reserve(net.depth());
  trace.activations.reserve(net.depth());
  const Vector* prev = &trace.input;
  for (const Layer& layer : net.layers()) {
    Vector z = matvec(layer.weights, *prev);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += layer.bias[i];
    Vector a(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) a[i] = activate(layer.activation, z[i]);
    trace.preacts.push_back(std::move(z));
    trace.activations.push_back(std::move(a));
    prev = &trace.activations.back();
  }
  return trace;
}

namespace {

void check_trace(const Network& net, const ForwardTrace& trace) {
  if (trace.preacts.size() != net.depth() || trace.activations.size() != net.depth() ||
      trace.input.size() != net.input_dim()) {
    throw DimensionError("trace does not match network depth or input size");
  }
  for (std::size_t l = 0; l < net.depth(); ++l) {
    if (trace.preacts[l].size() != net.layers()[l].outputs()) {
      throw DimensionError("trace layer " + std::to_string(l) + " has wrong width");
    }
  }
}

}  // namespace

Matrix jacobian(const Network& net, const ForwardTrace& trace) {
  check_trace(net, trace);
  Matrix z;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const Layer& layer = net.layers()[l];
    Matrix dw = layer.weights;
    for (std::size_t r = 0; r < dw.rows(); ++r) {
      const double d = activate_derivative(layer.activation, trace.preacts[l][r]);
      for (double& v : dw.row(r)) v *= d;
    }
    z = l == 0 ? std::move(dw) : matmul(dw, z);
  }
  return z;
}

Matrix jacobian(const Network& net, std::span<const double> x) {
  return jacobian(net, forward(net, x));
}

Vector vector_jacobian_product(const Network& net, const ForwardTrace& trace,
                               std::span<const double> u) {
  check_trace(net, trace);
  if (u.size() != net.output_dim()) {
    throw DimensionError("vector_jacobian_product: cotangent has wrong length");
  }
  Vector g(u.begin(), u.end());
  for (std::size_t l = net.depth(); l-- > 0;) {
    const Layer& layer = net.layers()[l];
    for (std::size_t r = 0; r < g.size(); ++r) {
      g[r] *= activate_derivative(layer.activation, trace.preacts[l][r]);
    }
    g = matvec_transposed(layer.weights, g);
  }
  return g;
}

Vector softmax(std::span<const double> logits) {
  if (logits.empty()) throw DimensionError("softmax: empty logits");
  const double m = *std::max_element(logits.begin(), logits.end());
  Vector out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

Label classify(const Network& net, std::span<const double> x) {
  return argmax(softmax(forward(net, x).output()));
}

std::string_view to_string(Proxy proxy) {
  return proxy == Proxy::softmax ? "softmax" : "logits";
}

std::optional<Proxy> parse_proxy(std::string_view name) {
  if (name == "softmax") return Proxy::softmax;
  if (name == "logits") return Proxy::logits;
  return std::nullopt;
}

ProxyEvaluation evaluate_proxy(const Network& net, std::span<const double> x,
                               Proxy proxy) {
  const ForwardTrace trace = forward(net, x);
  Matrix z = jacobian(net, trace);
  if (proxy == Proxy::logits) return {trace.output(), std::move(z)};

  // d softmax / d logits = diag(s) - s s^T
  Vector s = softmax(trace.output());
  Matrix js(z.rows(), z.cols());
  const Vector sz = matvec_transposed(z, s);  // z^T s
  for (std::size_t i = 0; i < z.rows(); ++i) {
    auto out = js.row(i);
    const auto zi = z.row(i);
    for (std::size_t c = 0; c < z.cols(); ++c) out[c] = s[i] * (zi[c] - sz[c]);
  }
  return {std::move(s), std::move(js)};
}

Vector proxy_values(const Network& net, std::span<const double> x, Proxy proxy) {
  Vector logits = forward(net, x).output();
  return proxy == Proxy::logits ? logits : softmax(logits);
}

Vector proxy_component_gradient(const Network& net, std::span<const double> x,
                                Label k, Proxy proxy) {
  const ForwardTrace trace = forward(net, x);
  if (k >= net.output_dim()) throw DomainError("class index out of range");
  Vector u(net.output_dim(), 0.0);
  if (proxy == Proxy::logits) {
    u[k] = 1.0;
  } else {
    const Vector s = softmax(trace.output());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = -s[k] * s[i];
    u[k] += s[k];
  }
  return vector_jacobian_product(net, trace, u);
}

LossGradient cross_entropy_grad(const Network& net, std::span<const double> x,
                                Label label) {
  if (label >= net.output_dim()) {
    throw DomainError("cross_entropy_grad: label " + std::to_string(label) +
                      " out of range for " + std::to_string(net.output_dim()) +
                      " classes");
  }
  const ForwardTrace trace = forward(net, x);
  const Vector& logits = trace.output();
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - m);
  LossGradient out;
  out.loss = m + std::log(sum) - logits[label];

  Vector residual = softmax(logits);
  residual[label] -= 1.0;
  out.grad = matvec_transposed(jacobian(net, trace), residual);
  return out;
}

Network train_sgd(const Network& net, const Dataset& data, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
  if (data.size() == 0) throw PreconditionError("train_sgd: empty dataset");
  data.validate(net.output_dim());
  if (data.dim() != net.input_dim()) {
    throw DimensionError("train_sgd: dataset dimension " + std::to_string(data.dim()) +
                         " does not match network input " +
                         std::to_string(net.input_dim()));
  }
  if (cfg.batch_size == 0) throw PreconditionError("train_sgd: batch size must be > 0");
  if (cfg.epochs == 0) return net;

  std::vector<Layer> layers = net.layers();
  Network current(layers);
  std::vector<Matrix> grad_w;
  std::vector<Vector> grad_b;
  for (const Layer& layer : layers) {
    grad_w.emplace_back(layer.outputs(), layer.inputs());
    grad_b.emplace_back(layer.outputs(), 0.0);
  }

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      for (auto& g : grad_w) std::fill(g.entries().begin(), g.entries().end(), 0.0);
      for (auto& g : grad_b) std::fill(g.begin(), g.end(), 0.0);

      for (std::size_t s = start; s < stop; ++s) {
        const std::size_t idx = order[s];
        const ForwardTrace trace = forward(current, data.samples[idx]);
        const Vector& logits = trace.output();
        Vector delta = softmax(logits);
        const double loss = -std::log(std::max(delta[data.labels[idx]], 1e-300));
        if (!std::isfinite(loss)) {
          throw TrainingError("train_sgd: non-finite loss in epoch " +
                              std::to_string(epoch));
        }
        epoch_loss += loss;
        delta[data.labels[idx]] -= 1.0;  // d loss / d logits

        for (std::size_t l = layers.size(); l-- > 0;) {
          const Layer& layer = layers[l];
          for (std::size_t r = 0; r < delta.size(); ++r) {
            delta[r] *= activate_derivative(layer.activation, trace.preacts[l][r]);
          }
          const Vector& below = l == 0 ? trace.input : trace.activations[l - 1];
          for (std::size_t r = 0; r < delta.size(); ++r) {
            if (delta[r] == 0.0) continue;
            auto row = grad_w[l].row(r);
            for (std::size_t c = 0; c < below.size(); ++c) row[c] += delta[r] * below[c];
            grad_b[l][r] += delta[r];
          }
          if (l > 0) delta = matvec_transposed(layer.weights, delta);
        }
      }

      const double step = cfg.learning_rate / static_cast<double>(stop - start);
      for (std::size_t l = 0; l < layers.size(); ++l) {
        auto& w = layers[l].weights.entries();
        const auto& gw = grad_w[l].entries();
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= step * gw[i];
        for (std::size_t i = 0; i < layers[l].bias.size(); ++i) {
          layers[l].bias[i] -= step * grad_b[l][i];
        }
      }
      current = Network(layers);
    }
    const double mean_loss = epoch_loss / static_cast<double>(data.size());
    if (!std::isfinite(mean_loss)) {
      throw TrainingError("train_sgd: diverged in epoch " + std::to_string(epoch));
    }
    for (const Layer& layer : layers) {
      if (!all_finite(layer.weights.entries()) || !all_finite(layer.bias)) {
        throw TrainingError("train_sgd: non-finite weights in epoch " +
                            std::to_string(epoch));
      }
    }
    if (on_epoch) on_epoch(epoch, mean_loss);
  }
  return current;
}

double accuracy(const Network& net, const Dataset& data) {
  if (data.size() == 0) throw PreconditionError("accuracy: empty dataset");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (classify(net, data.samples[i]) == data.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace pertfool
