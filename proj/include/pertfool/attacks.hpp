#pragma once

// Classification attacks built on the first-order model
//   L(x + eta) ~ L(x) + eta . grad L(x),   ||eta||_p <= eps.
// Minimizing the linearization over the lp ball has the closed form
// eta = -eps * (dual maximizer of grad L), which every method below reuses
// with a different choice of L.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "pertfool/network.hpp"
#include "pertfool/numeric.hpp"

namespace pertfool {

enum class Method { alg1, alg1_n, alg2, fgsm, deepfool, pgd, random };

struct AttackSpec {
  Method method = Method::alg1;
  NormExponent p = NormExponent::infinity();
  double eps = 0.0;
  /// n for alg1_n and pgd.
  std::size_t iters = 1;
  std::uint64_t seed = 0;
  /// Keep x + eta inside [0, 1] by shrinking eta componentwise.
  bool clip01 = false;
  Proxy proxy = Proxy::softmax;

  // DeepFool
  double overshoot = 1.02;
  std::size_t max_iterations = 50;
  /// Project the accumulated perturbation onto the eps ball each iteration.
  bool cap_to_eps = true;

  // PGD
  bool random_start = true;

  /// Class the attack pushes away from. Defaults to classify(x).
  std::optional<Label> source_class;
};

/// Short method label used in reports, e.g. "alg1", "alg1-5", "pgd-10".
std::string method_label(const AttackSpec& spec);
/// Parses a method label into `spec.method` (and `spec.iters` for "-n"
/// suffixes). Throws ParseError on unknown names.
void apply_method_label(AttackSpec& spec, std::string_view label);

struct AttackOutcome {
  Vector eta;
  Vector x_adv;
  /// classify(x_adv) differs from the source class.
  bool fooled = false;
  /// Full margin loss relative to the source class before and after.
  double loss_before = 0.0;
  double loss_after = 0.0;
  std::size_t iterations_used = 0;
  /// Linearized feasibility eps*||grad L||_q >= L at x. Only evaluated by
  /// the margin-based methods (alg1, alg1-n, deepfool).
  std::optional<bool> feasible_linearized;
  /// The attack direction had a zero gradient, so eta stayed zero.
  bool degenerate = false;
  Label source_class = 0;
  Label adversarial_class = 0;
};

struct MarginLoss {
  double value = 0.0;
  Vector grad;
  Label k = 0;           // class defended
  Label competitor = 0;  // minimizing l != k
};

/// L(x) = min_{l != k} f_k(x) - f_l(x) with k = classify(x), and its
/// gradient for the minimizing l (lowest index on ties).
MarginLoss margin_loss(const Network& net, std::span<const double> x,
                       Proxy proxy = Proxy::softmax);
/// Same with the defended class fixed to k.
MarginLoss margin_loss_against(const Network& net, std::span<const double> x, Label k,
                               Proxy proxy = Proxy::softmax);

struct TargetedMargin {
  double value = 0.0;
  Vector grad;
  Label k = 0;
};

/// L_t(x) = f_k(x) - f_t(x) for a fixed target t != classify(x).
TargetedMargin targeted_margin(const Network& net, std::span<const double> x, Label t,
                               Proxy proxy = Proxy::softmax);

/// true when the linearized problem L + eta.grad < 0, ||eta||_p <= eps can
/// be solved, i.e. unless eps*||grad||_q < L.
bool feasibility_check(double loss, std::span<const double> grad, NormExponent p,
                       double eps);

/// argmin over ||eta||_p <= eps of eta . grad:
///   eta_i = -eps sign(g_i) |g_i|^(q-1) / ||g||_q^(q-1).
Vector gn_closed_form(std::span<const double> grad, NormExponent p, double eps);

/// Smallest-norm eta with loss + eta.grad <= 0; its norm is loss/||grad||_q.
/// Returns zero when loss <= 0. Throws UnsatisfiableError for a zero
/// gradient with positive loss.
Vector min_norm_step(double loss, std::span<const double> grad, NormExponent p);

AttackOutcome attack_alg1(const Network& net, std::span<const double> x,
                          const AttackSpec& spec);
AttackOutcome attack_alg1_n(const Network& net, std::span<const double> x,
                            const AttackSpec& spec);
AttackOutcome attack_alg2(const Network& net, std::span<const double> x,
                          const AttackSpec& spec);
AttackOutcome attack_fgsm(const Network& net, std::span<const double> x,
                          Label true_label, const AttackSpec& spec);
AttackOutcome attack_deepfool(const Network& net, std::span<const double> x,
                              const AttackSpec& spec);
/// l-inf only.
AttackOutcome attack_pgd(const Network& net, std::span<const double> x, Label true_label,
                         const AttackSpec& spec);
/// Independent +-eps / m^(1/p) entries, i.e. +-eps for p = inf.
AttackOutcome attack_random(const Network& net, std::span<const double> x,
                            const AttackSpec& spec);
/// One closed-form step on the targeted margin toward class t.
AttackOutcome attack_targeted(const Network& net, std::span<const double> x, Label t,
                              const AttackSpec& spec);

/// Dispatches on spec.method.
AttackOutcome run_attack(const Network& net, std::span<const double> x, Label true_label,
                         const AttackSpec& spec);

}  // namespace pertfool
