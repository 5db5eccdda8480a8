#include "pertfool/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "pertfool/errors.hpp"

namespace pertfool {

std::vector<std::size_t> correctly_classified(const Network& net, const Dataset& data) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (classify(net, data.samples[i]) == data.labels[i]) out.push_back(i);
  }
  return out;
}

std::uint64_t sample_seed(std::uint64_t base, std::size_t index) {
  return base ^ static_cast<std::uint64_t>(index);
}

FoolingResult fooling_ratio(const Network& net, const Dataset& data, const AttackSpec& spec) {
  if (data.size() == 0) throw PreconditionError("fooling_ratio: empty dataset");
  data.validate(net.output_dim());
  FoolingResult out;
  double iterations = 0.0;
  for (std::size_t i : correctly_classified(net, data)) {
    AttackSpec s = spec;
    s.seed = sample_seed(spec.seed, i);
    s.source_class.reset();
    const AttackOutcome o = run_attack(net, data.samples[i], data.labels[i], s);
    ++out.correct;
    if (o.fooled) ++out.flipped;
    iterations += static_cast<double>(o.iterations_used);
  }
  if (out.correct > 0) {
    out.ratio = static_cast<double>(out.flipped) / static_cast<double>(out.correct);
    out.mean_iterations = iterations / static_cast<double>(out.correct);
  }
  return out;
}

namespace {

void finish_mean(RobustnessStatistic& stat, const char* name) {
  if (stat.per_sample.empty()) {
    throw PreconditionError(std::string(name) +
                            ": no correctly classified sample contributes a value");
  }
  double sum = 0.0;
  for (double v : stat.per_sample) sum += v;
  stat.value = sum / static_cast<double>(stat.per_sample.size());
}

}  // namespace

RobustnessStatistic rho1(const Network& net, const Dataset& data, NormExponent p,
                         Proxy proxy, double overshoot) {
  if (data.size() == 0) throw PreconditionError("rho1: empty dataset");
  AttackSpec spec;
  spec.method = Method::deepfool;
  spec.p = p;
  spec.eps = std::numeric_limits<double>::infinity();
  spec.cap_to_eps = false;
  spec.proxy = proxy;
  spec.overshoot = overshoot;

  RobustnessStatistic stat;
  for (std::size_t i : correctly_classified(net, data)) {
    ++stat.evaluated;
    const Vector& x = data.samples[i];
    const double xnorm = pnorm(x, p);
    if (xnorm == 0.0) {
      ++stat.excluded_degenerate;
      continue;
    }
    const AttackOutcome o = attack_deepfool(net, x, spec);
    if (o.degenerate) {
      ++stat.excluded_degenerate;
      continue;
    }
    if (!o.fooled) {
      ++stat.excluded_unfooled;
      continue;
    }
    stat.per_sample.push_back(pnorm(o.eta, p) / xnorm);
    stat.sample_indices.push_back(i);
  }
  finish_mean(stat, "rho1");
  return stat;
}

RobustnessStatistic rho2(const Network& net, const Dataset& data, NormExponent p,
                         Proxy proxy) {
  if (data.size() == 0) throw PreconditionError("rho2: empty dataset");
  const NormExponent q = dual_exponent(p);
  RobustnessStatistic stat;
  for (std::size_t i : correctly_classified(net, data)) {
    ++stat.evaluated;
    const MarginLoss m = margin_loss(net, data.samples[i], proxy);
    const double gq = pnorm(m.grad, q);
    if (gq == 0.0) {
      ++stat.excluded_degenerate;
      continue;
    }
    stat.per_sample.push_back(m.value / gq);
    stat.sample_indices.push_back(i);
  }
  finish_mean(stat, "rho2");
  return stat;
}

MinEpsResult search_min_eps(const std::function<double(double)>& ratio_at,
                            const MinEpsOptions& opts) {
  if (!(opts.threshold > 0.0 && opts.threshold <= 1.0)) {
    throw PreconditionError("min eps search: threshold must lie in (0, 1]");
  }
  if (!(opts.start > 0.0) || !(opts.cap >= opts.start) || !(opts.resolution > 0.0)) {
    throw PreconditionError("min eps search: need 0 < start <= cap and resolution > 0");
  }
  double lo = 0.0;
  double hi = opts.start;
  double ratio = ratio_at(hi);
  while (ratio < opts.threshold) {
    if (hi >= opts.cap) return {std::nullopt, ratio};
    lo = hi;
    hi = std::min(2.0 * hi, opts.cap);
    ratio = ratio_at(hi);
  }
  double best = ratio;
  while (hi - lo > opts.resolution) {
    const double mid = 0.5 * (lo + hi);
    const double r = ratio_at(mid);
    if (r >= opts.threshold) {
      hi = mid;
      best = r;
    } else {
      lo = mid;
    }
  }
  return {hi, best};
}

MinEpsResult min_eps_for_threshold(const Network& net, const Dataset& data,
                                   const AttackSpec& deepfool_spec,
                                   const MinEpsOptions& opts) {
  AttackSpec spec = deepfool_spec;
  spec.method = Method::deepfool;
  spec.cap_to_eps = true;
  return search_min_eps(
      [&](double eps) {
        spec.eps = eps;
        const FoolingResult r = fooling_ratio(net, data, spec);
        if (!r.ratio) {
          throw PreconditionError("min eps search: no correctly classified samples");
        }
        return *r.ratio;
      },
      opts);
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) {
    throw PreconditionError("log_grid: need 0 < lo <= hi and n >= 1");
  }
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  grid.back() = hi;
  return grid;
}

std::vector<double> default_eps_grid() { return log_grid(1e-3, 0.5, 20); }

std::vector<SweepRecord> run_sweep(const Network& net, const Dataset& data,
                                   const std::vector<AttackSpec>& methods,
                                   const std::vector<double>& eps_grid,
                                   std::size_t threads) {
  if (data.size() == 0) throw PreconditionError("sweep: empty dataset");
  const std::size_t cells = methods.size() * eps_grid.size();
  std::vector<SweepRecord> records(cells);
  std::vector<std::exception_ptr> errors(cells);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      try {
        AttackSpec spec = methods[c / eps_grid.size()];
        spec.eps = eps_grid[c % eps_grid.size()];
        const FoolingResult r = fooling_ratio(net, data, spec);
        records[c] = SweepRecord{method_label(spec), spec.eps,
                                 r.ratio.value_or(std::numeric_limits<double>::quiet_NaN()),
                                 r.mean_iterations, r.correct};
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };

  const std::size_t n_threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(cells, 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::stable_sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    if (a.method != b.method) return a.method < b.method;
    return a.eps < b.eps;
  });
  return records;
}

RobustnessReport build_report(const Network& net, const Dataset& data,
                              const ReportOptions& opts) {
  RobustnessReport report;
  report.test_error = 1.0 - accuracy(net, data);
  report.rho1 = rho1(net, data, opts.p, opts.proxy, opts.overshoot);
  report.rho2 = rho2(net, data, opts.p, opts.proxy);

  AttackSpec deepfool;
  deepfool.method = Method::deepfool;
  deepfool.p = opts.p;
  deepfool.proxy = opts.proxy;
  deepfool.overshoot = opts.overshoot;
  report.min_eps = min_eps_for_threshold(net, data, deepfool, opts.min_eps);
  report.threshold = opts.min_eps.threshold;

  if (!opts.curve_methods.empty()) {
    report.eps_grid = opts.eps_grid.empty() ? default_eps_grid() : opts.eps_grid;
    report.fooling_curve =
        run_sweep(net, data, opts.curve_methods, report.eps_grid, opts.threads);
  }
  return report;
}

}  // namespace pertfool
