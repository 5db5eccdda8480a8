#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "pertfool/errors.hpp"
#include "pertfool/metrics.hpp"
#include "toy_model.hpp"

using namespace pertfool;

namespace {

const NormExponent kInfP = NormExponent::infinity();

// f0 = x - c, f1 = c - x: class 0 right of c.
Network threshold_net(double c) {
  return Network({Layer{Matrix(2, 1, {1, -1}), Vector{-c, c}, Activation::identity}});
}

Dataset line_data(const std::vector<double>& xs, const std::vector<Label>& labels) {
  Dataset d;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d.samples.push_back({xs[i]});
    d.labels.push_back(labels[i]);
  }
  return d;
}

AttackSpec make_spec(Method m, double eps) {
  AttackSpec s;
  s.method = m;
  s.eps = eps;
  s.iters = 5;
  s.seed = 3;
  return s;
}

}  // namespace

TEST_CASE("fooling ratio counts flips among correct samples") {
  // ten correct samples at 0.1 .. 1.0 and two misclassified ones
  std::vector<double> xs;
  std::vector<Label> ys;
  for (int i = 1; i <= 10; ++i) {
    xs.push_back(0.1 * i);
    ys.push_back(0);
  }
  xs.push_back(0.5);
  ys.push_back(1);
  xs.push_back(-0.5);
  ys.push_back(0);
  const Dataset d = line_data(xs, ys);
  const Network net = threshold_net(0.0);
  CHECK(correctly_classified(net, d).size() == 10);

  // alg1 with p = inf moves each x by -eps, fooling exactly x < eps
  const FoolingResult r = fooling_ratio(net, d, make_spec(Method::alg1, 0.45));
  CHECK(r.correct == 10);
  CHECK(r.flipped == 4);
  REQUIRE(r.ratio.has_value());
  CHECK(*r.ratio == doctest::Approx(0.4));
  CHECK(r.mean_iterations == doctest::Approx(1.0));

  for (Method m : {Method::alg1, Method::alg1_n, Method::alg2, Method::fgsm, Method::deepfool}) {
    CHECK(*fooling_ratio(net, d, make_spec(m, 0.0)).ratio == 0.0);
  }
  CHECK_THROWS_AS(fooling_ratio(net, Dataset{}, make_spec(Method::alg1, 0.1)),
                  PreconditionError);
  const Dataset wrong = line_data({0.5, 0.7}, {1, 1});
  const FoolingResult none = fooling_ratio(net, wrong, make_spec(Method::alg1, 0.1));
  CHECK_FALSE(none.ratio.has_value());
  CHECK(none.correct == 0);
}

TEST_CASE("sample seeds") {
  CHECK(sample_seed(5, 0) == 5);
  CHECK(sample_seed(5, 3) == (5u ^ 3u));
}

TEST_CASE("rho1 on a threshold classifier") {
  const Network net = threshold_net(0.2);
  const Dataset d = line_data({0.25, 0.4, 0.1}, {0, 0, 0});
  const RobustnessStatistic r = rho1(net, d, kInfP, Proxy::logits);
  REQUIRE(r.per_sample.size() == 2);
  CHECK(r.evaluated == 2);
  CHECK(r.per_sample[0] == doctest::Approx(1.02 * 0.05 / 0.25));
  CHECK(r.per_sample[1] == doctest::Approx(1.02 * 0.2 / 0.4));
  CHECK(r.value == doctest::Approx((r.per_sample[0] + r.per_sample[1]) / 2));
  CHECK(r.sample_indices == std::vector<std::size_t>{0, 1});
}

TEST_CASE("rho1 exclusions and errors") {
  // origin sample has zero norm
  const Network net = threshold_net(-0.5);
  const Dataset d = line_data({0.0, 0.5}, {0, 0});
  const RobustnessStatistic r = rho1(net, d, kInfP, Proxy::logits);
  CHECK(r.excluded_degenerate == 1);
  CHECK(r.per_sample.size() == 1);
  CHECK_THROWS_AS(rho1(net, Dataset{}, kInfP), PreconditionError);
  CHECK_THROWS_AS(rho1(net, line_data({0.5}, {1}), kInfP), PreconditionError);
  // a constant classifier can never be fooled
  const Network flat({Layer{Matrix(2, 1, 0.0), Vector{1, 0}, Activation::identity}});
  CHECK_THROWS_AS(rho1(flat, line_data({0.5}, {0}), kInfP), PreconditionError);
}

TEST_CASE("rho2 equals the linearized minimal budget") {
  const Network net = threshold_net(0.2);
  const Dataset d = line_data({0.25, 0.4}, {0, 0});
  const RobustnessStatistic r = rho2(net, d, kInfP, Proxy::logits);
  CHECK(r.per_sample[0] == doctest::Approx(0.05));
  CHECK(r.per_sample[1] == doctest::Approx(0.2));
  CHECK(r.value == doctest::Approx(0.125));

  const auto& m = toy::model();
  for (NormExponent p : {NormExponent(1), NormExponent(2), kInfP}) {
    const RobustnessStatistic s = rho2(m.net, m.test, p);
    REQUIRE(s.per_sample.size() > 0);
    for (std::size_t i = 0; i < s.per_sample.size(); ++i) {
      CHECK(s.per_sample[i] > 0.0);
      const MarginLoss ml = margin_loss(m.net, m.test.samples[s.sample_indices[i]]);
      CHECK(s.per_sample[i] ==
            doctest::Approx(pnorm(min_norm_step(ml.value, ml.grad, p), p)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(rho2(net, Dataset{}, kInfP), PreconditionError);
  CHECK_THROWS_AS(rho2(net, line_data({0.0}, {0}), kInfP), PreconditionError);
}

TEST_CASE("min eps search on a step function") {
  const auto step = [](double eps) { return eps >= 0.05 ? 1.0 : 0.0; };
  const MinEpsResult r = search_min_eps(step);
  REQUIRE(r.eps.has_value());
  CHECK(std::abs(*r.eps - 0.05) <= 1e-3);
  CHECK(*r.eps >= 0.05);
  CHECK(r.best_ratio == 1.0);

  const MinEpsResult none = search_min_eps([](double) { return 0.7; });
  CHECK_FALSE(none.eps.has_value());
  CHECK(none.best_ratio == 0.7);

  MinEpsOptions bad;
  bad.threshold = 0.0;
  CHECK_THROWS_AS(search_min_eps(step, bad), PreconditionError);
  bad.threshold = 1.5;
  CHECK_THROWS_AS(search_min_eps(step, bad), PreconditionError);
  bad = MinEpsOptions{};
  bad.start = 0.0;
  CHECK_THROWS_AS(search_min_eps(step, bad), PreconditionError);
}

TEST_CASE("min eps on the toy model shrinks on the easier half") {
  const auto& m = toy::model();
  AttackSpec df;
  df.method = Method::deepfool;
  const MinEpsResult full = min_eps_for_threshold(m.net, m.test, df);
  REQUIRE(full.eps.has_value());
  CHECK(full.best_ratio >= 0.99);

  const RobustnessStatistic r2 = rho2(m.net, m.test, kInfP);
  std::vector<std::size_t> order(r2.per_sample.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return r2.per_sample[a] < r2.per_sample[b]; });
  std::vector<std::size_t> easy;
  for (std::size_t i = 0; i < order.size() / 2; ++i) easy.push_back(r2.sample_indices[order[i]]);
  const MinEpsResult half = min_eps_for_threshold(m.net, m.test.subset(easy), df);
  REQUIRE(half.eps.has_value());
  CHECK(*half.eps <= *full.eps + 1e-3);
}

TEST_CASE("eps grids") {
  const auto g = default_eps_grid();
  REQUIRE(g.size() == 20);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 0.5);
  CHECK(g[10] == doctest::Approx(0.0263).epsilon(0.01));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(g[1] / g[0]));
  CHECK(log_grid(0.1, 1.0, 1) == std::vector<double>{0.1});
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), PreconditionError);
  CHECK_THROWS_AS(log_grid(1.0, 0.5, 3), PreconditionError);
  CHECK_THROWS_AS(log_grid(0.1, 1.0, 0), PreconditionError);
}

TEST_CASE("sweep records are complete, sorted and thread independent") {
  const auto& m = toy::model();
  const std::vector<AttackSpec> methods{make_spec(Method::random, 0), make_spec(Method::alg1, 0)};
  const std::vector<double> grid{0.2, 0.01, 0.05};
  const auto serial = run_sweep(m.net, m.test, methods, grid, 1);
  REQUIRE(serial.size() == 6);
  CHECK(serial[0].method == "alg1");
  CHECK(serial[0].eps == 0.01);
  CHECK(serial[2].eps == 0.2);
  CHECK(serial[3].method == "random");
  for (const auto& r : serial) CHECK(r.samples == correctly_classified(m.net, m.test).size());
  const auto parallel = run_sweep(m.net, m.test, methods, grid, 4);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(parallel[i].method == serial[i].method);
    CHECK(parallel[i].eps == serial[i].eps);
    CHECK(parallel[i].fooling_ratio == serial[i].fooling_ratio);
    CHECK(parallel[i].mean_iterations == serial[i].mean_iterations);
  }
  AttackSpec l2pgd = make_spec(Method::pgd, 0);
  l2pgd.p = NormExponent(2);
  CHECK_THROWS_AS(run_sweep(m.net, m.test, {l2pgd}, grid, 3), PreconditionError);
  CHECK_THROWS_AS(run_sweep(m.net, Dataset{}, methods, grid), PreconditionError);
}

TEST_CASE("fooling curves on the toy model") {
  const auto& m = toy::model();
  CHECK(accuracy(m.net, m.test) >= 0.9);
  const std::vector<AttackSpec> methods{make_spec(Method::alg1, 0), make_spec(Method::alg1_n, 0),
                                        make_spec(Method::random, 0),
                                        make_spec(Method::deepfool, 0)};
  const auto grid = default_eps_grid();
  const auto records = run_sweep(m.net, m.test, methods, grid, 2);
  auto curve = [&](const std::string& name) {
    std::vector<double> c;
    for (const auto& r : records)
      if (r.method == name) c.push_back(r.fooling_ratio);
    return c;
  };
  const auto alg1 = curve("alg1"), alg15 = curve("alg1-5"), rnd = curve("random"),
             df = curve("deepfool");
  REQUIRE(alg1.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(rnd[i] <= alg1[i] + 0.02);
    CHECK(alg15[i] >= alg1[i] - 0.02);
    if (i > 0) {
      CHECK(alg1[i] >= alg1[i - 1] - 0.02);
      CHECK(df[i] >= df[i - 1] - 0.02);
    }
  }
}

TEST_CASE("alg2 decreases the top score to first order") {
  const auto& m = toy::model();
  std::size_t decreased = 0, total = 0;
  for (std::size_t i : correctly_classified(m.net, m.test)) {
    const Vector& x = m.test.samples[i];
    const AttackOutcome o = attack_alg2(m.net, x, make_spec(Method::alg2, 1e-3));
    const Label k = o.source_class;
    ++total;
    if (proxy_values(m.net, o.x_adv, Proxy::softmax)[k] < proxy_values(m.net, x, Proxy::softmax)[k])
      ++decreased;
  }
  CHECK(double(decreased) >= 0.95 * double(total));
}

TEST_CASE("report assembles every statistic") {
  const auto& m = toy::model();
  ReportOptions opts;
  opts.curve_methods = {make_spec(Method::alg1, 0)};
  opts.eps_grid = {0.01, 0.1};
  const RobustnessReport r = build_report(m.net, m.test, opts);
  CHECK(r.test_error == doctest::Approx(1.0 - accuracy(m.net, m.test)));
  CHECK(std::isfinite(r.rho1.value));
  CHECK(r.rho2.value == rho2(m.net, m.test, kInfP).value);
  REQUIRE(r.min_eps.eps.has_value());
  CHECK(r.threshold == 0.99);
  CHECK(r.fooling_curve.size() == 2);
  CHECK(r.eps_grid == opts.eps_grid);
  CHECK(build_report(m.net, m.test, ReportOptions{}).fooling_curve.empty());
}
