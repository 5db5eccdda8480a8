#include "pertfool/cli.hpp"

#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "pertfool/attacks.hpp"
#include "pertfool/dataset.hpp"
#include "pertfool/errors.hpp"
#include "pertfool/model_io.hpp"
#include "pertfool/network.hpp"
#include "pertfool/opnorm.hpp"

namespace pertfool::cli {

using ojson = nlohmann::ordered_json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError(what + ": cannot parse '" + text + "'");
  }
  if (used != text.size()) throw ParseError(what + ": trailing characters in '" + text + "'");
  return v;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& part : split(text, ',')) grid.push_back(parse_number(part, "eps grid"));
  if (grid.empty()) throw ParseError("eps grid: no values");
  for (double e : grid) {
    if (!(e >= 0.0)) throw PreconditionError("eps grid: values must be >= 0");
  }
  return grid;
}

Proxy parse_proxy_flag(const std::string& text) {
  const auto proxy = parse_proxy(text);
  if (!proxy) throw ParseError("proxy: expected softmax or logits, got '" + text + "'");
  return *proxy;
}

void write_text(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("E_IO", "cannot open " + path + " for writing");
  os << content;
  if (!os) throw Error("E_IO", "failed writing " + path);
}

Dataset load_limited(const std::string& path, std::size_t limit) {
  Dataset data = load_dataset(path);
  if (limit > 0 && limit < data.size()) {
    std::vector<std::size_t> idx(limit);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    data = data.subset(idx);
  }
  return data;
}

ojson number_or_null(double v) {
  return std::isfinite(v) ? ojson(v) : ojson(nullptr);
}

ojson outcome_json(const AttackOutcome& o) {
  ojson j;
  j["fooled"] = o.fooled;
  j["source_class"] = o.source_class;
  j["adversarial_class"] = o.adversarial_class;
  j["loss_before"] = number_or_null(o.loss_before);
  j["loss_after"] = number_or_null(o.loss_after);
  j["iterations_used"] = o.iterations_used;
  j["feasible_linearized"] =
      o.feasible_linearized ? ojson(*o.feasible_linearized) : ojson(nullptr);
  j["degenerate"] = o.degenerate;
  j["eta"] = o.eta;
  j["x_adv"] = o.x_adv;
  return j;
}

ojson statistic_json(const RobustnessStatistic& s) {
  ojson j;
  j["value"] = s.value;
  j["evaluated"] = s.evaluated;
  j["used"] = s.per_sample.size();
  j["excluded_unfooled"] = s.excluded_unfooled;
  j["excluded_degenerate"] = s.excluded_degenerate;
  return j;
}

ojson records_json(const std::vector<SweepRecord>& records) {
  ojson arr = ojson::array();
  for (const auto& r : records) {
    ojson j;
    j["method"] = r.method;
    j["eps"] = r.eps;
    j["fooling_ratio"] = number_or_null(r.fooling_ratio);
    j["mean_iterations"] = r.mean_iterations;
    j["samples"] = r.samples;
    arr.push_back(std::move(j));
  }
  return arr;
}

// Options shared by attack-style commands.
struct AttackFlags {
  std::string method = "alg1";
  std::string p = "inf";
  double eps = 0.1;
  std::size_t iters = 5;
  std::optional<std::uint64_t> seed;
  bool clip01 = false;
  std::string proxy = "softmax";
  double overshoot = 1.02;
  bool uncapped = false;

  void add_to(CLI::App& app, bool with_method) {
    if (with_method) app.add_option("--method", method, "Attack method")->capture_default_str();
    app.add_option("--p", p, "Norm exponent (number >= 1 or inf)")->capture_default_str();
    app.add_option("--iters", iters, "Iterations n for alg1-n and pgd")->capture_default_str();
    app.add_option("--seed", seed, "Seed (required for random and pgd)");
    app.add_flag("--clip01", clip01, "Clip adversarial inputs to [0,1]");
    app.add_option("--proxy", proxy, "Class score proxy: softmax or logits")
        ->capture_default_str();
    app.add_option("--overshoot", overshoot, "DeepFool overshoot factor")->capture_default_str();
    app.add_flag("--uncapped", uncapped, "Do not cap DeepFool at eps");
  }

  AttackSpec to_spec(const std::string& label) const {
    AttackSpec spec;
    spec.iters = iters;
    apply_method_label(spec, label);
    spec.p = NormExponent::parse(p);
    spec.seed = seed.value_or(0);
    spec.clip01 = clip01;
    spec.proxy = parse_proxy_flag(proxy);
    spec.overshoot = overshoot;
    spec.cap_to_eps = !uncapped;
    if ((spec.method == Method::random || spec.method == Method::pgd) && !seed) {
      throw PreconditionError("method " + label + " is stochastic and needs --seed");
    }
    return spec;
  }

  ojson echo() const {
    ojson j;
    j["p"] = p;
    j["iters"] = iters;
    j["seed"] = seed ? ojson(*seed) : ojson(nullptr);
    j["clip01"] = clip01;
    j["proxy"] = proxy;
    j["overshoot"] = overshoot;
    j["deepfool_capped"] = !uncapped;
    return j;
  }
};

ojson header(const std::string& command) {
  ojson j;
  j["tool"] = "pertfool";
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  return j;
}

}  // namespace

std::string format_sweep_csv(const std::vector<SweepRecord>& records,
                             const std::string& config_json) {
  std::string out = "# pertfool sweep\n# config: " + config_json + "\n";
  out += "method,eps,fooling_ratio,mean_iterations,samples\n";
  for (const auto& r : records) {
    out += r.method + ',' + format_double(r.eps) + ',' + format_double(r.fooling_ratio) + ',' +
           format_double(r.mean_iterations) + ',' + std::to_string(r.samples) + '\n';
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial perturbations via first-order perturbation analysis", "pertfool"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // gen-data -----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen-data", "Generate or convert a dataset to CSV");
  std::string gen_kind = "blobs";
  BlobParams blob;
  RingParams ring;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_images, gen_labels, gen_out;
  std::size_t gen_limit = 0, gen_test_samples = 0;
  std::string gen_test_out;
  double gen_sigma = std::numeric_limits<double>::quiet_NaN();
  gen->add_option("--kind", gen_kind, "blobs, rings or mnist-idx")->capture_default_str();
  gen->add_option("--classes", blob.classes, "Number of classes")->capture_default_str();
  gen->add_option("--dim", blob.dim, "Input dimension")->capture_default_str();
  gen->add_option("--samples", blob.samples, "Number of samples")->capture_default_str();
  gen->add_option("--separation", blob.separation, "Class separation in units of sigma")
      ->capture_default_str();
  gen->add_option("--sigma", gen_sigma, "Noise standard deviation");
  gen->add_option("--seed", gen_seed, "Seed (required for synthetic kinds)");
  gen->add_option("--images", gen_images, "IDX image file (mnist-idx)");
  gen->add_option("--labels", gen_labels, "IDX label file (mnist-idx)");
  gen->add_option("--limit", gen_limit, "Keep only the first N samples (0 = all)");
  gen->add_option("--out", gen_out, "Output CSV path")->required();
  gen->add_option("--test-samples", gen_test_samples,
                  "Extra samples from the same classes, written to --test-out");
  gen->add_option("--test-out", gen_test_out, "Output CSV for the held-out samples");

  // train --------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train a fully connected classifier");
  std::string train_data, train_out, train_hidden = "150,100", train_act = "relu";
  std::optional<std::uint64_t> train_seed;
  std::size_t train_epochs = 20, train_batch = 32;
  double train_lr = 0.05;
  train->add_option("--data", train_data, "Training CSV")->required();
  train->add_option("--hidden", train_hidden, "Hidden layer sizes, comma separated")
      ->capture_default_str();
  train->add_option("--act", train_act, "Hidden activation")->capture_default_str();
  train->add_option("--epochs", train_epochs, "Epochs")->capture_default_str();
  train->add_option("--batch", train_batch, "Batch size")->capture_default_str();
  train->add_option("--lr", train_lr, "Learning rate")->capture_default_str();
  train->add_option("--seed", train_seed, "Seed for initialization and shuffling")->required();
  train->add_option("--out", train_out, "Output model JSON")->required();

  // attack -------------------------------------------------------------------
  auto* attack = app.add_subcommand("attack", "Attack a single sample");
  std::string atk_model, atk_data, atk_out;
  std::size_t atk_index = 0;
  AttackFlags atk_flags;
  attack->add_option("--model", atk_model, "Model JSON")->required();
  attack->add_option("--data", atk_data, "Dataset CSV")->required();
  attack->add_option("--index", atk_index, "Sample index")->capture_default_str();
  attack->add_option("--eps", atk_flags.eps, "Budget")->capture_default_str();
  attack->add_option("--out", atk_out, "Output JSON (default stdout)");
  atk_flags.add_to(*attack, true);

  // sweep --------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "Fooling ratio over an eps grid");
  std::string sw_model, sw_data, sw_out, sw_methods = "alg1,alg1-5,alg2,fgsm,deepfool,pgd,random",
                                         sw_grid;
  std::size_t sw_threads = 1, sw_limit = 0;
  AttackFlags sw_flags;
  sweep->add_option("--model", sw_model, "Model JSON")->required();
  sweep->add_option("--data", sw_data, "Dataset CSV")->required();
  sweep->add_option("--method,--methods", sw_methods, "Comma separated methods")
      ->capture_default_str();
  sweep->add_option("--eps-grid", sw_grid, "Comma separated eps values (default: 20 log points in [1e-3, 0.5])");
  sweep->add_option("--threads", sw_threads, "Worker threads")->capture_default_str();
  sweep->add_option("--limit", sw_limit, "Use only the first N samples (0 = all)");
  sweep->add_option("--out", sw_out, "Output CSV (default stdout)");
  sw_flags.add_to(*sweep, false);

  // report -------------------------------------------------------------------
  auto* report = app.add_subcommand("report", "Robustness report (test error, rho1, rho2, min eps)");
  std::string rp_model, rp_data, rp_out, rp_methods, rp_grid, rp_p = "inf", rp_proxy = "softmax",
                                                               rp_compare;
  double rp_threshold = 0.99, rp_overshoot = 1.02;
  std::size_t rp_threads = 1, rp_limit = 0, rp_iters = 5;
  std::optional<std::uint64_t> rp_seed;
  report->add_option("--model", rp_model, "Model JSON")->required();
  report->add_option("--data", rp_data, "Dataset CSV")->required();
  report->add_option("--p", rp_p, "Norm exponent")->capture_default_str();
  report->add_option("--proxy", rp_proxy, "softmax or logits")->capture_default_str();
  report->add_option("--threshold", rp_threshold, "Fooling threshold for the min eps search")
      ->capture_default_str();
  report->add_option("--overshoot", rp_overshoot, "DeepFool overshoot")->capture_default_str();
  report->add_option("--methods", rp_methods, "Optional methods for a fooling curve");
  report->add_option("--eps-grid", rp_grid, "Grid for the fooling curve");
  report->add_option("--iters", rp_iters, "Iterations for alg1-n and pgd")->capture_default_str();
  report->add_option("--seed", rp_seed, "Seed for stochastic curve methods");
  report->add_option("--compare", rp_compare, "Second model to compare rho2 against");
  report->add_option("--threads", rp_threads, "Worker threads")->capture_default_str();
  report->add_option("--limit", rp_limit, "Use only the first N samples (0 = all)");
  report->add_option("--out", rp_out, "Output JSON (default stdout)");

  // opnorm-attack ------------------------------------------------------------
  auto* opn = app.add_subcommand("opnorm-attack", "Regression attack maximizing ||J eta||_2");
  std::string op_model, op_data, op_out, op_p = "2";
  std::size_t op_index = 0, op_max_dim = kDefaultBruteForceDim;
  double op_eps = 0.1;
  opn->add_option("--model", op_model, "Model JSON")->required();
  opn->add_option("--data", op_data, "Dataset CSV")->required();
  opn->add_option("--index", op_index, "Sample index")->capture_default_str();
  opn->add_option("--p", op_p, "1, 2 or inf")->capture_default_str();
  opn->add_option("--eps", op_eps, "Budget")->capture_default_str();
  opn->add_option("--max-dim", op_max_dim, "Enumeration limit for p = inf")
      ->capture_default_str();
  opn->add_option("--out", op_out, "Output JSON (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error code=E_USAGE message=" << ojson(std::string(e.what())).dump() << '\n';
    return 2;
  }

  try {
    if (*gen) {
      ojson cfg = header("gen-data");
      cfg["kind"] = gen_kind;
      if (gen_test_samples > 0 && gen_test_out.empty()) {
        throw PreconditionError("gen-data: --test-samples needs --test-out");
      }
      const std::size_t train_count = blob.samples;
      blob.samples += gen_test_samples;
      Dataset data;
      if (gen_kind == "blobs" || gen_kind == "rings") {
        if (!gen_seed) throw PreconditionError("gen-data: --seed is required for " + gen_kind);
        cfg["classes"] = blob.classes;
        cfg["dim"] = blob.dim;
        cfg["samples"] = train_count;
        cfg["test_samples"] = gen_test_samples;
        cfg["separation"] = blob.separation;
        cfg["seed"] = *gen_seed;
        if (gen_kind == "blobs") {
          if (!std::isnan(gen_sigma)) blob.sigma = gen_sigma;
          cfg["sigma"] = blob.sigma;
          data = make_blobs(blob, *gen_seed);
        } else {
          ring.classes = blob.classes;
          ring.dim = blob.dim;
          ring.samples = blob.samples;
          ring.separation = blob.separation;
          if (!std::isnan(gen_sigma)) ring.sigma = gen_sigma;
          cfg["sigma"] = ring.sigma;
          data = make_rings(ring, *gen_seed);
        }
      } else if (gen_kind == "mnist-idx") {
        if (gen_images.empty() || gen_labels.empty()) {
          throw PreconditionError("gen-data: mnist-idx needs --images and --labels");
        }
        cfg["images"] = gen_images;
        cfg["labels"] = gen_labels;
        cfg["limit"] = gen_limit;
        data = load_idx(gen_images, gen_labels,
                        gen_limit ? std::optional<std::size_t>(gen_limit) : std::nullopt);
      } else {
        throw ParseError("gen-data: unknown kind '" + gen_kind +
                         "' (allowed: blobs, rings, mnist-idx)");
      }
      auto emit = [&](const std::string& path, const Dataset& part, const char* role) {
        ojson c = cfg;
        c["part"] = role;
        std::ostringstream os;
        os << "# pertfool gen-data\n# config: " << c.dump() << '\n';
        write_dataset_csv(os, part);
        write_text(path, os.str(), out);
      };
      if (gen_kind != "mnist-idx" && gen_test_samples > 0) {
        auto [head, tail] = data.split(train_count);
        emit(gen_out, head, "train");
        emit(gen_test_out, tail, "test");
      } else {
        emit(gen_out, data, "all");
      }
      return 0;
    }

    if (*train) {
      const Dataset data = load_dataset(train_data);
      if (data.size() == 0) throw PreconditionError("train: empty dataset");
      const auto act = parse_activation(train_act);
      if (!act) {
        throw ParseError("train: unknown activation '" + train_act +
                         "' (allowed: identity, tanh, sigmoid, relu)");
      }
      std::size_t classes = 0;
      for (Label l : data.labels) classes = std::max(classes, l + 1);
      classes = std::max<std::size_t>(classes, 2);
      std::vector<std::size_t> dims{data.dim()};
      for (const auto& h : split(train_hidden, ',')) {
        dims.push_back(static_cast<std::size_t>(parse_number(h, "hidden size")));
      }
      dims.push_back(classes);

      TrainConfig tc(*train_seed);
      tc.epochs = train_epochs;
      tc.batch_size = train_batch;
      tc.learning_rate = train_lr;
      const Network init = make_network(dims, *act, Activation::identity, *train_seed);
      const Network net = train_sgd(init, data, tc, [&](std::size_t epoch, double loss) {
        err << "epoch " << epoch + 1 << " loss " << format_double(loss) << '\n';
      });

      ojson cfg = header("train");
      cfg["data"] = train_data;
      cfg["dims"] = dims;
      cfg["activation"] = train_act;
      cfg["epochs"] = train_epochs;
      cfg["batch"] = train_batch;
      cfg["lr"] = train_lr;
      cfg["seed"] = *train_seed;
      cfg["train_accuracy"] = accuracy(net, data);
      save_model_file(train_out, net, cfg.dump());
      return 0;
    }

    if (*attack) {
      const Network net = load_model_file(atk_model);
      const Dataset data = load_dataset(atk_data);
      data.validate(net.output_dim());
      if (atk_index >= data.size()) {
        throw PreconditionError("attack: index " + std::to_string(atk_index) +
                                " out of range for " + std::to_string(data.size()) +
                                " samples");
      }
      AttackSpec spec = atk_flags.to_spec(atk_flags.method);
      spec.eps = atk_flags.eps;
      const AttackOutcome o =
          run_attack(net, data.samples[atk_index], data.labels[atk_index], spec);
      ojson doc;
      ojson cfg = header("attack");
      cfg["model"] = atk_model;
      cfg["data"] = atk_data;
      cfg["index"] = atk_index;
      cfg["method"] = method_label(spec);
      cfg["eps"] = spec.eps;
      cfg.update(atk_flags.echo());
      doc["config"] = cfg;
      doc["true_label"] = data.labels[atk_index];
      doc["outcome"] = outcome_json(o);
      write_text(atk_out, doc.dump(2) + "\n", out);
      return 0;
    }

    if (*sweep) {
      const Network net = load_model_file(sw_model);
      const Dataset data = load_limited(sw_data, sw_limit);
      data.validate(net.output_dim());
      std::vector<AttackSpec> specs;
      std::vector<std::string> labels;
      for (const auto& m : split(sw_methods, ',')) {
        specs.push_back(sw_flags.to_spec(m));
        labels.push_back(method_label(specs.back()));
      }
      if (specs.empty()) throw PreconditionError("sweep: no methods given");
      const std::vector<double> grid = sw_grid.empty() ? default_eps_grid() : parse_grid(sw_grid);
      const auto records = run_sweep(net, data, specs, grid, sw_threads);

      ojson cfg = header("sweep");
      cfg["model"] = sw_model;
      cfg["data"] = sw_data;
      cfg["limit"] = sw_limit;
      cfg["methods"] = labels;
      cfg["eps_grid"] = grid;
      cfg.update(sw_flags.echo());
      write_text(sw_out, format_sweep_csv(records, cfg.dump()), out);
      return 0;
    }

    if (*report) {
      const Network net = load_model_file(rp_model);
      const Dataset data = load_limited(rp_data, rp_limit);
      data.validate(net.output_dim());

      ReportOptions opts;
      opts.p = NormExponent::parse(rp_p);
      opts.proxy = parse_proxy_flag(rp_proxy);
      opts.overshoot = rp_overshoot;
      opts.min_eps.threshold = rp_threshold;
      opts.threads = rp_threads;
      std::vector<std::string> labels;
      if (!rp_methods.empty()) {
        AttackFlags flags;
        flags.p = rp_p;
        flags.iters = rp_iters;
        flags.seed = rp_seed;
        flags.proxy = rp_proxy;
        flags.overshoot = rp_overshoot;
        for (const auto& m : split(rp_methods, ',')) {
          opts.curve_methods.push_back(flags.to_spec(m));
          labels.push_back(method_label(opts.curve_methods.back()));
        }
        opts.eps_grid = rp_grid.empty() ? default_eps_grid() : parse_grid(rp_grid);
      }
      const RobustnessReport rep = build_report(net, data, opts);

      ojson cfg = header("report");
      cfg["model"] = rp_model;
      cfg["data"] = rp_data;
      cfg["limit"] = rp_limit;
      cfg["p"] = rp_p;
      cfg["proxy"] = rp_proxy;
      cfg["threshold"] = rp_threshold;
      cfg["overshoot"] = rp_overshoot;
      cfg["methods"] = labels;
      cfg["iters"] = rp_iters;
      cfg["seed"] = rp_seed ? ojson(*rp_seed) : ojson(nullptr);
      cfg["compare"] = rp_compare.empty() ? ojson(nullptr) : ojson(rp_compare);

      ojson doc;
      doc["report_version"] = kReportVersion;
      doc["config"] = cfg;
      doc["samples"] = data.size();
      doc["test_error"] = rep.test_error;
      doc["rho1"] = statistic_json(rep.rho1);
      doc["rho2"] = statistic_json(rep.rho2);
      doc["min_eps_99"] = rep.min_eps.eps ? ojson(*rep.min_eps.eps) : ojson(nullptr);
      doc["min_eps_threshold"] = rep.threshold;
      doc["min_eps_best_ratio"] = rep.min_eps.best_ratio;
      doc["eps_grid"] = rep.eps_grid;
      doc["fooling_curve"] = records_json(rep.fooling_curve);

      if (!rp_compare.empty()) {
        const Network other = load_model_file(rp_compare);
        other.output_dim();
        data.validate(other.output_dim());
        const double other_rho2 = rho2(other, data, opts.p, opts.proxy).value;
        const double other_error = 1.0 - accuracy(other, data);
        ojson models = ojson::array();
        models.push_back({{"model", rp_model}, {"test_error", rep.test_error},
                          {"rho2", rep.rho2.value}});
        models.push_back(
            {{"model", rp_compare}, {"test_error", other_error}, {"rho2", other_rho2}});
        ojson cmp;
        cmp["models"] = models;
        // more robust (larger rho2) first; emitted for inspection only
        cmp["rho2_order"] = rep.rho2.value >= other_rho2
                                ? ojson::array({rp_model, rp_compare})
                                : ojson::array({rp_compare, rp_model});
        doc["comparison"] = cmp;
      }
      write_text(rp_out, doc.dump(2) + "\n", out);
      return 0;
    }

    if (*opn) {
      const Network net = load_model_file(op_model);
      const Dataset data = load_dataset(op_data);
      if (op_index >= data.size()) {
        throw PreconditionError("opnorm-attack: index out of range");
      }
      const NormExponent p = NormExponent::parse(op_p);
      const RegressionAttackResult r =
          regression_attack(net, data.samples[op_index], p, op_eps, op_max_dim);
      ojson cfg = header("opnorm-attack");
      cfg["model"] = op_model;
      cfg["data"] = op_data;
      cfg["index"] = op_index;
      cfg["p"] = op_p;
      cfg["eps"] = op_eps;
      cfg["max_dim"] = op_max_dim;
      ojson doc;
      doc["config"] = cfg;
      doc["output_gain"] = r.output_gain;
      doc["opnorm_estimate"] = r.opnorm_estimate;
      doc["exact"] = r.exact;
      doc["degenerate"] = r.degenerate;
      doc["eta"] = r.eta;
      write_text(op_out, doc.dump(2) + "\n", out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error code=" << e.code() << " message=" << ojson(std::string(e.what())).dump()
        << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error code=E_INTERNAL message=" << ojson(std::string(e.what())).dump() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace pertfool::cli
