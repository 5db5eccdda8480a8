#include "pertfool/attacks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "pertfool/errors.hpp"

namespace pertfool {

std::string method_label(const AttackSpec& spec) {
  switch (spec.method) {
    case Method::alg1: return "alg1";
    case Method::alg1_n: return "alg1-" + std::to_string(spec.iters);
    case Method::alg2: return "alg2";
    case Method::fgsm: return "fgsm";
    case Method::deepfool: return "deepfool";
    case Method::pgd: return "pgd-" + std::to_string(spec.iters);
    case Method::random: return "random";
  }
  return "unknown";
}

void apply_method_label(AttackSpec& spec, std::string_view label) {
  std::string_view base = label;
  std::optional<std::size_t> n;
  if (const auto dash = label.find('-'); dash != std::string_view::npos) {
    base = label.substr(0, dash);
    const auto digits = label.substr(dash + 1);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || value == 0) {
      throw ParseError("method: bad iteration count in '" + std::string(label) + "'");
    }
    n = value;
  }
  if (base == "alg1") {
    spec.method = n ? Method::alg1_n : Method::alg1;
  } else if (base == "pgd") {
    spec.method = Method::pgd;
  } else if (!n && base == "alg2") {
    spec.method = Method::alg2;
  } else if (!n && base == "fgsm") {
    spec.method = Method::fgsm;
  } else if (!n && base == "deepfool") {
    spec.method = Method::deepfool;
  } else if (!n && base == "random") {
    spec.method = Method::random;
  } else {
    throw ParseError("method: unknown method '" + std::string(label) +
                     "' (allowed: alg1, alg1-<n>, alg2, fgsm, deepfool, pgd[-<n>], random)");
  }
  if (n) spec.iters = *n;
}

namespace {

Label checked_source(const Network& net, std::span<const double> x, const AttackSpec& spec) {
  if (spec.source_class) {
    if (*spec.source_class >= net.output_dim()) {
      throw DomainError("source class " + std::to_string(*spec.source_class) +
                        " out of range");
    }
    return *spec.source_class;
  }
  return classify(net, x);
}

void check_budget(const AttackSpec& spec) {
  if (!(spec.eps >= 0.0)) throw PreconditionError("attack: eps must be >= 0");
}

double margin_value(std::span<const double> values, Label k) {
  if (values.size() < 2) throw DomainError("margin loss needs at least two classes");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < values.size(); ++l) {
    if (l == k) continue;
    best = std::min(best, values[k] - values[l]);
  }
  return best;
}

MarginLoss margin_from(const ProxyEvaluation& eval, Label k) {
  const auto& f = eval.values;
  if (f.size() < 2) throw DomainError("margin loss needs at least two classes");
  if (k >= f.size()) throw DomainError("margin loss: class index out of range");
  MarginLoss out;
  out.k = k;
  out.value = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < f.size(); ++l) {
    if (l == k) continue;
    const double gap = f[k] - f[l];
    if (gap < out.value) {
      out.value = gap;
      out.competitor = l;
    }
  }
  out.grad = subtract(eval.jacobian.row(k), eval.jacobian.row(out.competitor));
  return out;
}

Vector clip_to_unit_box(std::span<const double> x, Vector eta) {
  for (std::size_t i = 0; i < eta.size(); ++i) {
    eta[i] = std::clamp(x[i] + eta[i], 0.0, 1.0) - x[i];
  }
  return eta;
}

Vector apply_clip(std::span<const double> x, Vector eta, const AttackSpec& spec) {
  return spec.clip01 ? clip_to_unit_box(x, std::move(eta)) : eta;
}

void finalize(const Network& net, std::span<const double> x, Label source,
              const AttackSpec& spec, AttackOutcome& out) {
  out.source_class = source;
  out.x_adv = add(x, out.eta);
  out.adversarial_class = classify(net, out.x_adv);
  out.fooled = out.adversarial_class != source;
  out.loss_after = margin_value(proxy_values(net, out.x_adv, spec.proxy), source);
}

}  // namespace

MarginLoss margin_loss(const Network& net, std::span<const double> x, Proxy proxy) {
  if (net.output_dim() < 2) throw DomainError("margin loss needs at least two classes");
  return margin_from(evaluate_proxy(net, x, proxy), classify(net, x));
}

MarginLoss margin_loss_against(const Network& net, std::span<const double> x, Label k,
                               Proxy proxy) {
  if (net.output_dim() < 2) throw DomainError("margin loss needs at least two classes");
  return margin_from(evaluate_proxy(net, x, proxy), k);
}

TargetedMargin targeted_margin(const Network& net, std::span<const double> x, Label t,
                               Proxy proxy) {
  const Label k = classify(net, x);
  if (t >= net.output_dim()) throw DomainError("target class out of range");
  if (t == k) {
    throw DomainError("targeted margin: target " + std::to_string(t) +
                      " is already the predicted class");
  }
  const ProxyEvaluation eval = evaluate_proxy(net, x, proxy);
  TargetedMargin out;
  out.k = k;
  out.value = eval.values[k] - eval.values[t];
  out.grad = subtract(eval.jacobian.row(k), eval.jacobian.row(t));
  return out;
}

bool feasibility_check(double loss, std::span<const double> grad, NormExponent p,
                       double eps) {
  if (!(eps >= 0.0)) throw PreconditionError("feasibility_check: eps must be >= 0");
  return !(eps * pnorm(grad, dual_exponent(p)) < loss);
}

Vector gn_closed_form(std::span<const double> grad, NormExponent p, double eps) {
  Vector eta = dual_maximizer(grad, p, eps).v;
  for (double& v : eta) v = -v;
  return eta;
}

Vector min_norm_step(double loss, std::span<const double> grad, NormExponent p) {
  if (loss <= 0.0) return Vector(grad.size(), 0.0);
  const double gq = pnorm(grad, dual_exponent(p));
  if (gq == 0.0) {
    throw UnsatisfiableError("min_norm_step: zero gradient cannot cancel a positive loss");
  }
  return gn_closed_form(grad, p, loss / gq);
}

AttackOutcome attack_alg1(const Network& net, std::span<const double> x,
                          const AttackSpec& spec) {
  AttackSpec single = spec;
  single.iters = 1;
  return attack_alg1_n(net, x, single);
}

AttackOutcome attack_alg1_n(const Network& net, std::span<const double> x,
                            const AttackSpec& spec) {
  check_budget(spec);
  if (spec.iters < 1) throw PreconditionError("alg1-n: n must be >= 1");
  const Label source = checked_source(net, x, spec);
  const double step_eps = spec.eps / static_cast<double>(spec.iters);

  AttackOutcome out;
  out.eta.assign(x.size(), 0.0);
  for (std::size_t i = 0; i < spec.iters; ++i) {
    const Vector current = add(x, out.eta);
    const MarginLoss m = margin_from(evaluate_proxy(net, current, spec.proxy), source);
    if (i == 0) {
      out.loss_before = m.value;
      out.feasible_linearized = feasibility_check(m.value, m.grad, spec.p, spec.eps);
    }
    if (classify(net, current) != source) break;
    if (is_zero(m.grad)) {
      out.degenerate = true;
      break;
    }
    const Vector step = gn_closed_form(m.grad, spec.p, step_eps);
    out.eta = apply_clip(x, add(out.eta, step), spec);
    ++out.iterations_used;
  }
  finalize(net, x, source, spec, out);
  return out;
}

AttackOutcome attack_alg2(const Network& net, std::span<const double> x,
                          const AttackSpec& spec) {
  check_budget(spec);
  const Label source = checked_source(net, x, spec);
  AttackOutcome out;
  out.loss_before = margin_value(proxy_values(net, x, spec.proxy), source);
  const Vector grad = proxy_component_gradient(net, x, source, spec.proxy);
  if (is_zero(grad)) {
    out.degenerate = true;
    out.eta.assign(x.size(), 0.0);
  } else {
    out.eta = apply_clip(x, gn_closed_form(grad, spec.p, spec.eps), spec);
  }
  out.iterations_used = 1;
  finalize(net, x, source, spec, out);
  return out;
}

AttackOutcome attack_fgsm(const Network& net, std::span<const double> x, Label true_label,
                          const AttackSpec& spec) {
  check_budget(spec);
  const Label source = checked_source(net, x, spec);
  AttackOutcome out;
  out.loss_before = margin_value(proxy_values(net, x, spec.proxy), source);
  const LossGradient ce = cross_entropy_grad(net, x, true_label);
  if (is_zero(ce.grad)) {
    out.degenerate = true;
    out.eta.assign(x.size(), 0.0);
  } else {
    // ascent on the training loss
    out.eta = apply_clip(x, dual_maximizer(ce.grad, spec.p, spec.eps).v, spec);
  }
  out.iterations_used = 1;
  finalize(net, x, source, spec, out);
  return out;
}

AttackOutcome attack_deepfool(const Network& net, std::span<const double> x,
                              const AttackSpec& spec) {
  check_budget(spec);
  if (!(spec.overshoot >= 1.0)) throw PreconditionError("deepfool: overshoot must be >= 1");
  const Label source = checked_source(net, x, spec);
  const NormExponent q = dual_exponent(spec.p);
  const bool capped = spec.cap_to_eps && std::isfinite(spec.eps);

  AttackOutcome out;
  out.eta.assign(x.size(), 0.0);
  Vector accumulated(x.size(), 0.0);

  for (std::size_t it = 0; it < spec.max_iterations; ++it) {
    const Vector current = add(x, out.eta);
    const ProxyEvaluation eval = evaluate_proxy(net, current, spec.proxy);
    if (it == 0) {
      const MarginLoss m = margin_from(eval, source);
      out.loss_before = m.value;
      out.feasible_linearized =
          capped ? std::optional<bool>(feasibility_check(m.value, m.grad, spec.p, spec.eps))
                 : std::optional<bool>(true);
    }
    if (classify(net, current) != source) break;

    const auto& f = eval.values;
    std::optional<Label> best;
    double best_ratio = std::numeric_limits<double>::infinity();
    Vector best_grad;
    for (std::size_t l = 0; l < f.size(); ++l) {
      if (l == source) continue;
      Vector w = subtract(eval.jacobian.row(source), eval.jacobian.row(l));
      const double den = pnorm(w, q);
      if (den == 0.0) continue;
      const double ratio = std::abs(f[source] - f[l]) / den;
      if (!best || ratio < best_ratio) {
        best = l;
        best_ratio = ratio;
        best_grad = std::move(w);
      }
    }
    if (!best) {
      out.degenerate = true;
      break;
    }

    const Vector step = min_norm_step(f[source] - f[*best], best_grad, spec.p);
    accumulated = add(accumulated, step);
    Vector eta = scaled(accumulated, spec.overshoot);
    if (capped) eta = project_to_ball(eta, spec.p, spec.eps);
    eta = apply_clip(x, std::move(eta), spec);
    if (capped || spec.clip01) accumulated = scaled(eta, 1.0 / spec.overshoot);
    out.eta = std::move(eta);
    ++out.iterations_used;
  }
  finalize(net, x, source, spec, out);
  return out;
}

AttackOutcome attack_pgd(const Network& net, std::span<const double> x, Label true_label,
                         const AttackSpec& spec) {
  check_budget(spec);
  if (!spec.p.is_infinite()) throw PreconditionError("pgd: only p = inf is supported");
  if (spec.iters < 1) throw PreconditionError("pgd: n must be >= 1");
  const Label source = checked_source(net, x, spec);
  const double alpha = spec.eps / static_cast<double>(spec.iters);

  AttackOutcome out;
  out.loss_before = margin_value(proxy_values(net, x, spec.proxy), source);
  out.eta.assign(x.size(), 0.0);
  if (spec.random_start) {
    Rng rng(spec.seed);
    for (double& v : out.eta) v = rng.uniform(-spec.eps, spec.eps);
  }
  out.eta = apply_clip(x, std::move(out.eta), spec);

  for (std::size_t i = 0; i < spec.iters; ++i) {
    const LossGradient ce = cross_entropy_grad(net, add(x, out.eta), true_label);
    if (i == 0 && is_zero(ce.grad)) out.degenerate = true;
    for (std::size_t j = 0; j < out.eta.size(); ++j) {
      out.eta[j] = std::clamp(out.eta[j] + alpha * sign(ce.grad[j]), -spec.eps, spec.eps);
    }
    out.eta = apply_clip(x, std::move(out.eta), spec);
    ++out.iterations_used;
  }
  finalize(net, x, source, spec, out);
  return out;
}

AttackOutcome attack_random(const Network& net, std::span<const double> x,
                            const AttackSpec& spec) {
  check_budget(spec);
  const Label source = checked_source(net, x, spec);
  AttackOutcome out;
  out.loss_before = margin_value(proxy_values(net, x, spec.proxy), source);
  const double magnitude =
      spec.p.is_infinite()
          ? spec.eps
          : spec.eps / std::pow(static_cast<double>(x.size()), 1.0 / spec.p.value());
  Rng rng(spec.seed);
  out.eta.resize(x.size());
  for (double& v : out.eta) v = rng.uniform() < 0.5 ? -magnitude : magnitude;
  out.eta = apply_clip(x, std::move(out.eta), spec);
  out.iterations_used = 1;
  finalize(net, x, source, spec, out);
  return out;
}

AttackOutcome attack_targeted(const Network& net, std::span<const double> x, Label t,
                              const AttackSpec& spec) {
  check_budget(spec);
  const TargetedMargin tm = targeted_margin(net, x, t, spec.proxy);
  AttackOutcome out;
  out.loss_before = margin_value(proxy_values(net, x, spec.proxy), tm.k);
  out.feasible_linearized = feasibility_check(tm.value, tm.grad, spec.p, spec.eps);
  if (is_zero(tm.grad)) {
    out.degenerate = true;
    out.eta.assign(x.size(), 0.0);
  } else {
    out.eta = apply_clip(x, gn_closed_form(tm.grad, spec.p, spec.eps), spec);
  }
  out.iterations_used = 1;
  finalize(net, x, tm.k, spec, out);
  return out;
}

AttackOutcome run_attack(const Network& net, std::span<const double> x, Label true_label,
                         const AttackSpec& spec) {
  switch (spec.method) {
    case Method::alg1: return attack_alg1(net, x, spec);
    case Method::alg1_n: return attack_alg1_n(net, x, spec);
    case Method::alg2: return attack_alg2(net, x, spec);
    case Method::fgsm: return attack_fgsm(net, x, true_label, spec);
    case Method::deepfool: return attack_deepfool(net, x, spec);
    case Method::pgd: return attack_pgd(net, x, true_label, spec);
    case Method::random: return attack_random(net, x, spec);
  }
  throw PreconditionError("run_attack: unknown method");
}

}  // namespace pertfool
