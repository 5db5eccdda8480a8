#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pertfool/attacks.hpp"
#include "pertfool/dataset.hpp"
#include "pertfool/network.hpp"

namespace pertfool {

/// Indices of the samples the network classifies correctly.
std::vector<std::size_t> correctly_classified(const Network& net, const Dataset& data);

/// Per-sample seeds are spec.seed ^ sample_index, so parallel and serial
/// evaluation draw identical noise.
std::uint64_t sample_seed(std::uint64_t base, std::size_t index);

struct FoolingResult {
  /// flipped / correct; empty when no sample is classified correctly.
  std::optional<double> ratio;
  std::size_t correct = 0;
  std::size_t flipped = 0;
  double mean_iterations = 0.0;
};

/// Fraction of correctly classified samples whose class changes under the
/// attack described by `spec`.
FoolingResult fooling_ratio(const Network& net, const Dataset& data, const AttackSpec& spec);

struct RobustnessStatistic {
  double value = 0.0;  // mean of per_sample
  std::vector<double> per_sample;
  std::vector<std::size_t> sample_indices;  // dataset index of each per_sample entry
  std::size_t evaluated = 0;                // correctly classified samples
  std::size_t excluded_unfooled = 0;        // DeepFool hit its iteration cap
  std::size_t excluded_degenerate = 0;      // zero norm input or zero gradient
};

/// Mean of ||r(x)||_p / ||x||_p over correctly classified samples, where
/// r(x) is the perturbation found by uncapped DeepFool.
RobustnessStatistic rho1(const Network& net, const Dataset& data, NormExponent p,
                         Proxy proxy = Proxy::softmax, double overshoot = 1.02);

/// Mean of L(x) / ||grad L(x)||_q over correctly classified samples: the
/// smallest budget at which the linearized attack becomes feasible.
RobustnessStatistic rho2(const Network& net, const Dataset& data, NormExponent p,
                         Proxy proxy = Proxy::softmax);

struct MinEpsResult {
  std::optional<double> eps;
  double best_ratio = 0.0;  // ratio at the returned eps, or at the cap
};

struct MinEpsOptions {
  double threshold = 0.99;
  double start = 1e-3;
  double cap = 1.0;
  double resolution = 1e-3;
};

/// Smallest eps (to within `resolution`) with ratio_at(eps) >= threshold,
/// found by doubling from `start` up to `cap` and then bisecting.
MinEpsResult search_min_eps(const std::function<double(double)>& ratio_at,
                            const MinEpsOptions& opts = {});

/// search_min_eps driven by eps-capped DeepFool fooling ratios.
MinEpsResult min_eps_for_threshold(const Network& net, const Dataset& data,
                                   const AttackSpec& deepfool_spec,
                                   const MinEpsOptions& opts = {});

/// n log-spaced points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);
std::vector<double> default_eps_grid();

struct SweepRecord {
  std::string method;
  double eps = 0.0;
  double fooling_ratio = 0.0;  // NaN when no sample is classified correctly
  double mean_iterations = 0.0;
  std::size_t samples = 0;
};

/// Evaluates every method at every eps on the same samples. Cells run on
/// `threads` workers; output is sorted by (method, eps).
std::vector<SweepRecord> run_sweep(const Network& net, const Dataset& data,
                                   const std::vector<AttackSpec>& methods,
                                   const std::vector<double>& eps_grid,
                                   std::size_t threads = 1);

struct RobustnessReport {
  double test_error = 0.0;
  RobustnessStatistic rho1;
  RobustnessStatistic rho2;
  MinEpsResult min_eps;
  double threshold = 0.99;
  std::vector<double> eps_grid;
  std::vector<SweepRecord> fooling_curve;
};

struct ReportOptions {
  NormExponent p = NormExponent::infinity();
  Proxy proxy = Proxy::softmax;
  double overshoot = 1.02;
  MinEpsOptions min_eps;
  /// Methods for the optional fooling curve; empty skips it.
  std::vector<AttackSpec> curve_methods;
  std::vector<double> eps_grid;
  std::size_t threads = 1;
};

RobustnessReport build_report(const Network& net, const Dataset& data,
                              const ReportOptions& opts);

}  // namespace pertfool
