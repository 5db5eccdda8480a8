#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pertfool/dataset.hpp"
#include "pertfool/numeric.hpp"

namespace pertfool {

enum class Activation { identity, tanh, sigmoid, relu };

double activate(Activation act, double z);
/// Derivative at the pre-activation z. relu'(0) is taken as 0.
double activate_derivative(Activation act, double z);
std::string_view to_string(Activation act);
std::optional<Activation> parse_activation(std::string_view name);

struct Layer {
  Matrix weights;  // out x in
  Vector bias;     // out
  Activation activation = Activation::identity;

  std::size_t inputs() const noexcept { return weights.cols(); }
  std::size_t outputs() const noexcept { return weights.rows(); }

  bool operator==(const Layer&) const = default;
};

/// Stack of fully connected layers. Immutable once built; the final layer's
/// activations are the logits.
class Network {
public:
  explicit Network(std::vector<Layer> layers);

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  std::size_t input_dim() const noexcept { return layers_.front().inputs(); }
  std::size_t output_dim() const noexcept { return layers_.back().outputs(); }

  bool operator==(const Network&) const = default;

private:
  std::vector<Layer> layers_;
};

/// Builds a network with layer sizes `dims` (input first), uniform
/// [-s, s] weights with s = sqrt(6 / (fan_in + fan_out)) and zero biases.
Network make_network(std::span<const std::size_t> dims, Activation hidden,
                     Activation output, std::uint64_t seed);

struct ForwardTrace {
  Vector input;
  std::vector<Vector> preacts;
  std::vector<Vector> activations;

  const Vector& output() const { return activations.back(); }
};

ForwardTrace forward(const Network& net, std::span<const double> x);

/// Input-output Jacobian as the layerwise product
///   Z = D_L W_L ... D_1 W_1,  D_l = diag(phi_l'(z_l)).
Matrix jacobian(const Network& net, const ForwardTrace& trace);
Matrix jacobian(const Network& net, std::span<const double> x);

/// J^T u by backpropagation, without forming J.
Vector vector_jacobian_product(const Network& net, const ForwardTrace& trace,
                               std::span<const double> u);

/// Numerically stable softmax (max subtraction).
Vector softmax(std::span<const double> logits);

/// argmax of the softmax probabilities, lowest index on ties.
Label classify(const Network& net, std::span<const double> x);

/// Which per-class score vector the attacks treat as the proxy f.
/// Softmax probabilities are the default; raw logits avoid vanishing
/// gradients on very confident predictions.
enum class Proxy { softmax, logits };

std::string_view to_string(Proxy proxy);
std::optional<Proxy> parse_proxy(std::string_view name);

struct ProxyEvaluation {
  Vector values;    // f(x), one score per class
  Matrix jacobian;  // d f / d x, classes x inputs
};

ProxyEvaluation evaluate_proxy(const Network& net, std::span<const double> x,
                               Proxy proxy);

Vector proxy_values(const Network& net, std::span<const double> x, Proxy proxy);

/// Gradient of the single proxy component f_k with one backward pass.
Vector proxy_component_gradient(const Network& net, std::span<const double> x,
                                Label k, Proxy proxy);

struct LossGradient {
  double loss = 0.0;
  Vector grad;
};

/// Cross-entropy -log softmax(f(x))[label] and its input gradient
/// J^T (softmax - onehot).
LossGradient cross_entropy_grad(const Network& net, std::span<const double> x,
                                Label label);

struct TrainConfig {
  explicit TrainConfig(std::uint64_t seed_) : seed(seed_) {}

  double learning_rate = 0.05;
  std::size_t batch_size = 32;
  std::size_t epochs = 20;
  std::uint64_t seed;
};

using EpochCallback = std::function<void(std::size_t epoch, double mean_loss)>;

/// Minibatch SGD on the mean cross-entropy. Works on a copy of `net`;
/// shuffling is driven by cfg.seed only. Throws TrainingError on a
/// non-finite loss.
Network train_sgd(const Network& net, const Dataset& data, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

/// Fraction of samples whose predicted class matches the label.
double accuracy(const Network& net, const Dataset& data);

}  // namespace pertfool
