// Copyright 2026 The vrlmc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// vrlmc command-line driver.
//
//   vrlmc datagen    --model logistic --n 600 --d 5 --out data.csv
//   vrlmc sample     --model logistic --data data.csv --method SAGA-LD ...
//   vrlmc minimize   --model logistic --data data.csv
//   vrlmc experiment --config exp.cfg --out results.csv
//   vrlmc bound      --kind saga --d 1 --N 100 --n 10 --delta 1e-3 ...
//   vrlmc predict    --algorithm SAGA-LD --kappa 1 --d 1 --N 100 --epsilon 0.1
//   vrlmc regime     --d 1 --N 10000 --epsilon 1e-3
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "vrlmc/config.hpp"
#include "vrlmc/dataset_io.hpp"
#include "vrlmc/error.hpp"
#include "vrlmc/experiment.hpp"
#include "vrlmc/optimizer.hpp"
#include "vrlmc/potentials.hpp"
#include "vrlmc/samplers.hpp"
#include "vrlmc/theory.hpp"

namespace {

using namespace vrlmc;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Flag values collected as text and layered over the --config file.
using Overrides = std::map<std::string, std::string>;

struct Common {
  std::string config_path;
  std::optional<std::string> seed;
  std::string out;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "key = value settings file");
  cmd->add_option("--seed", common.seed, "master seed (u64)");
  cmd->add_option("--out", common.out, "output path (default stdout)");
}

void add_text(CLI::App* cmd, Overrides& ov, const std::string& flag,
              const std::string& key, const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&ov, key](const std::string& v) { ov[key] = v; }, help);
}

KeyValueConfig resolve(const Common& common, const Overrides& ov) {
  KeyValueConfig kv;
  if (!common.config_path.empty()) kv = KeyValueConfig::load(common.config_path);
  for (const auto& [k, v] : ov) kv.set(k, v);
  if (common.seed) kv.set("seed", *common.seed);
  return kv;
}

// Writes through `write` to --out, or stdout when --out is empty.
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write(out);
}

std::size_t get_size(const KeyValueConfig& kv, std::string_view key,
                     std::size_t fallback) {
  return static_cast<std::size_t>(kv.get_u64(key).value_or(fallback));
}

Dataset load_or_generate(const KeyValueConfig& kv) {
  const ModelKind kind = parse_model_kind(kv.get_or("model", "logistic"));
  if (auto path = kv.get("data"); path && !path->empty())
    return load_csv_dataset(*path, kind);
  SyntheticParams sp;
  sp.noise_scale = kv.get_double("noise_scale").value_or(sp.noise_scale);
  sp.data_mean = kv.get_double("data_mean").value_or(sp.data_mean);
  sp.feature_scale = kv.get_double("feature_scale").value_or(sp.feature_scale);
  sp.lognormal_mu = kv.get_double("lognormal_mu").value_or(sp.lognormal_mu);
  sp.lognormal_sigma =
      kv.get_double("lognormal_sigma").value_or(sp.lognormal_sigma);
  const std::uint64_t seed =
      kv.get_u64("data_seed").value_or(kv.get_u64("seed").value_or(0));
  return generate_synthetic(kind, get_size(kv, "N", 600), get_size(kv, "d", 5),
                            seed, sp);
}

ModelOptions model_options(const KeyValueConfig& kv) {
  ModelOptions mo;
  mo.prior_variance = kv.get_double("prior_variance").value_or(1.0);
  mo.noise_scale = kv.get_double("noise_scale").value_or(1.0);
  return mo;
}

void add_data_flags(CLI::App* cmd, Overrides& ov) {
  add_text(cmd, ov, "--model", "model", "gaussian | logistic | lognormal");
  add_text(cmd, ov, "--data", "data", "dataset CSV (synthetic when omitted)");
  add_text(cmd, ov, "--n", "N", "synthetic rows");
  add_text(cmd, ov, "--d", "d", "synthetic dimension");
  add_text(cmd, ov, "--data-seed", "data_seed", "synthetic data seed");
  add_text(cmd, ov, "--noise-scale", "noise_scale", "gaussian sigma0");
  add_text(cmd, ov, "--data-mean", "data_mean", "gaussian data centre");
  add_text(cmd, ov, "--feature-scale", "feature_scale", "logistic feature sd");
  add_text(cmd, ov, "--lognormal-mu", "lognormal_mu", "log-normal mu");
  add_text(cmd, ov, "--lognormal-sigma", "lognormal_sigma", "log-normal sigma");
  add_text(cmd, ov, "--prior-variance", "prior_variance", "logistic alpha");
}

int run_datagen(const Common& common, const Overrides& ov) {
  const KeyValueConfig kv = resolve(common, ov);
  const Dataset data = load_or_generate(kv);
  emit(common.out, [&](std::ostream& os) { write_csv_dataset(os, data); });
  std::cerr << "rows=" << data.rows << " d=" << data.cols << '\n';
  return 0;
}

Method resolve_method(const KeyValueConfig& kv) {
  std::string name = kv.get_or("method", "SGLD");
  const auto option = kv.get("option");
  if (name == "SVRG-LD") {
    const std::string o = option.value_or("1");
    if (o == "1") return Method::kSvrgLD1;
    if (o == "2") return Method::kSvrgLD2;
    throw ConfigError("--option must be 1 or 2");
  }
  const Method m = parse_method(name);
  if (option) {
    if (!is_svrg(m)) throw ConfigError("--option applies only to SVRG-LD");
    if ((m == Method::kSvrgLD1) != (*option == "1"))
      throw ConfigError("--option conflicts with --method " + name);
  }
  return m;
}

int run_sample(const Common& common, const Overrides& ov, bool emit_velocity) {
  const KeyValueConfig kv = resolve(common, ov);
  const Dataset data = load_or_generate(kv);
  const auto potential = make_potential(data, model_options(kv));
  const Method method = resolve_method(kv);

  ChainConfig cc;
  cc.delta = kv.get_double("delta").value_or(cc.delta);
  cc.batch_size = get_size(kv, "batch", cc.batch_size);
  cc.iters = get_size(kv, "iters", cc.iters);
  cc.tau = get_size(kv, "tau",
                    (potential->num_components() + cc.batch_size - 1) /
                        std::max<std::size_t>(1, cc.batch_size));
  if (auto b = kv.get_u64("burn_in")) cc.burn_in = static_cast<std::size_t>(*b);
  cc.thin = get_size(kv, "thin", 1);
  cc.seed = kv.get_u64("seed").value_or(0);
  cc.keep_velocity = emit_velocity;
  std::uint64_t extra = 0;
  if (needs_center(method)) {
    MinimizeOptions mo;
    mo.seed = cc.seed;
    const ModeResult mode = saga_sgd_minimize(*potential, mo);
    if (!mode.converged)
      throw NumericalError("mode search failed: " + mode.diagnostic);
    cc.center = mode.x_star;
    extra = mode.gradient_queries;
  }
  const ChainOutput chain = run_chain(method, *potential, cc);
  emit(common.out, [&](std::ostream& os) { write_samples_csv(os, chain); });
  const double N = static_cast<double>(potential->num_components());
  std::cerr << "method=" << to_string(method)
            << " samples=" << chain.num_samples()
            << " queries=" << chain.gradient_queries + extra
            << " passes=" << format_double(
                   static_cast<double>(chain.gradient_queries + extra) / N)
            << '\n';
  return 0;
}

int run_minimize(const Common& common, const Overrides& ov) {
  const KeyValueConfig kv = resolve(common, ov);
  const Dataset data = load_or_generate(kv);
  const auto potential = make_potential(data, model_options(kv));
  MinimizeOptions mo;
  mo.seed = kv.get_u64("seed").value_or(0);
  mo.step = kv.get_double("step");
  mo.batch_size = get_size(kv, "batch", mo.batch_size);
  mo.max_iters = get_size(kv, "max_iters", mo.max_iters);
  mo.tolerance = kv.get_double("tolerance");
  const ModeResult r = saga_sgd_minimize(*potential, mo);
  emit(common.out, [&](std::ostream& os) {
    os << "coordinate,value\n";
    for (std::size_t j = 0; j < r.x_star.size(); ++j)
      os << (j + 1) << ',' << format_double(r.x_star[j]) << '\n';
  });
  std::cerr << "converged=" << (r.converged ? "true" : "false")
            << " grad_norm=" << format_double(r.grad_norm)
            << " iterations=" << r.iterations
            << " queries=" << r.gradient_queries << '\n';
  if (!r.converged) throw NumericalError(r.diagnostic);
  return 0;
}

int run_experiment_cmd(const Common& common, const Overrides& ov) {
  KeyValueConfig kv = resolve(common, ov);
  if (!common.out.empty()) kv.set("out", common.out);
  const ExperimentConfig cfg = ExperimentConfig::from_key_values(kv);
  const ExperimentResults res = run_experiment(cfg);
  emit(cfg.out_path,
       [&](std::ostream& os) { write_results_csv(os, cfg, res); });
  if (!cfg.out_path.empty()) {
    std::ofstream echo(cfg.out_path + ".config");
    if (!echo) throw ConfigError("cannot write resolved config echo");
    cfg.to_key_values().write(echo);
  }
  if (!cfg.curves_path.empty()) {
    std::ofstream curves(cfg.curves_path);
    if (!curves) throw ConfigError("cannot write '" + cfg.curves_path + "'");
    write_curves_csv(curves, res);
  }
  for (const auto& r : res.runs)
    if (!r.ok) std::cerr << "failed: " << r.error << '\n';
  for (const auto& best : select_best(cfg, res))
    std::cerr << "best " << to_string(best.point.method)
              << ": delta=" << format_double(best.point.delta)
              << " n=" << best.point.batch << " tau=" << best.point.tau
              << " score=" << format_double(best.score) << '\n';
  return 0;
}

struct BoundFlags {
  std::string kind = "saga";
  double d = 1, N = 1, m = 1, M = 1, delta = 0, n = 1, w2_init = 0;
  std::string T = "inf";
  std::optional<double> L, tau, sigma;
};

int run_bound(const BoundFlags& f) {
  BoundInputs in;
  in.d = f.d;
  in.N = f.N;
  in.m = f.m;
  in.M = f.M;
  in.L = f.L;
  in.delta = f.delta;
  in.T = (f.T == "inf") ? std::numeric_limits<double>::infinity()
                        : parse_double(f.T, "--T");
  in.n = f.n;
  in.tau = f.tau;
  in.sigma = f.sigma;
  in.w2_init = f.w2_init;
  auto scalar = [](double v) {
    std::cout << "value=" << format_double(v) << '\n';
    return 0;
  };
  if (f.kind == "init") return scalar(init_w2_bound(f.d, f.m));
  if (f.kind == "kinetic") return scalar(kinetic_bound(f.d, f.m));
  if (f.kind == "position-var") return scalar(position_var_bound(f.d, f.m));
  if (f.kind == "posterior-var") return scalar(posterior_var_bound(f.d, f.m));
  BoundResult r;
  if (f.kind == "sgld") r = sgld_bound(in);
  else if (f.kind == "saga") r = saga_bound(in);
  else if (f.kind == "svrg1") r = svrg_bound(in, SvrgOption::kI);
  else if (f.kind == "svrg2") r = svrg_bound(in, SvrgOption::kII);
  else if (f.kind == "cvuld") r = cvuld_bound(in);
  else throw ConfigError("unknown bound kind '" + f.kind + "'");
  std::cout << "value=" << format_double(r.value)
            << " precondition_ok=" << (r.precondition_ok ? "true" : "false");
  if (!r.message.empty()) std::cout << " note=\"" << r.message << '"';
  std::cout << '\n';
  return 0;
}

int run_predict(const std::string& algorithm, ComplexityQuery q) {
  std::cout << "algorithm,mixing,computation\n";
  auto row = [&](Method m) {
    q.algorithm = m;
    const ComplexityPrediction p = complexity_predict(q);
    std::cout << to_string(m) << ',' << format_double(p.mixing) << ','
              << format_double(p.computation) << '\n';
  };
  if (algorithm == "all") {
    for (Method m : {Method::kLD, Method::kULD, Method::kSGLD, Method::kSGULD,
                     Method::kSagaLD, Method::kSvrgLD1, Method::kSvrgLD2,
                     Method::kCvLD, Method::kCvULD})
      row(m);
  } else {
    row(parse_method(algorithm));
  }
  return 0;
}

int run_regime(double d, double N, double epsilon) {
  const RegimeThresholds t = regime_thresholds(d, N);
  std::cout << "regime=" << regime_classify(d, N, epsilon)
            << " upper=" << format_double(t.upper)
            << " lower=" << format_double(t.lower) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance-reduced stochastic-gradient Langevin samplers"};
  app.require_subcommand(1);

  Common common;
  Overrides ov;

  auto* datagen = app.add_subcommand("datagen", "write a synthetic dataset CSV");
  add_common(datagen, common);
  add_data_flags(datagen, ov);

  bool emit_velocity = false;
  auto* sample = app.add_subcommand("sample", "run one chain, write samples CSV");
  add_common(sample, common);
  add_data_flags(sample, ov);
  add_text(sample, ov, "--method", "method",
           "LD|ULD|SGLD|SGULD|SAGA-LD|SVRG-LD|SVRG-LD-I|SVRG-LD-II|CV-LD|CV-ULD");
  add_text(sample, ov, "--delta", "delta", "step size");
  add_text(sample, ov, "--batch", "batch", "mini-batch size n");
  add_text(sample, ov, "--tau", "tau", "SVRG epoch length");
  add_text(sample, ov, "--option", "option", "SVRG option {1|2}");
  add_text(sample, ov, "--iters", "iters", "iterations");
  add_text(sample, ov, "--burn-in", "burn_in", "discarded iterations");
  add_text(sample, ov, "--thin", "thin", "keep every k-th iterate");
  sample->add_flag("--emit-velocity", emit_velocity,
                   "add v1..vd columns (underdamped methods)");

  auto* minimize = app.add_subcommand("minimize", "SAGA descent to the mode");
  add_common(minimize, common);
  add_data_flags(minimize, ov);
  add_text(minimize, ov, "--step", "step", "step size (default 1/(2M))");
  add_text(minimize, ov, "--batch", "batch", "mini-batch size");
  add_text(minimize, ov, "--max-iters", "max_iters", "iteration budget");
  add_text(minimize, ov, "--tolerance", "tolerance", "gradient-norm tolerance");

  auto* experiment =
      app.add_subcommand("experiment", "grid x replica sweep, results CSV");
  add_common(experiment, common);
  add_text(experiment, ov, "--replicas", "replicas", "replications per point");
  add_text(experiment, ov, "--metric", "metric", "heldout | mse | w2");
  add_text(experiment, ov, "--target", "target", "passes-to-target threshold");
  add_text(experiment, ov, "--threads", "threads", "worker threads");
  add_text(experiment, ov, "--curves", "curves", "per-checkpoint curves CSV");

  BoundFlags bf;
  auto* bound = app.add_subcommand("bound", "evaluate a W2 convergence bound");
  bound->add_option("--kind", bf.kind,
                    "sgld|saga|svrg1|svrg2|cvuld|init|kinetic|position-var|"
                    "posterior-var");
  bound->add_option("--d", bf.d);
  bound->add_option("--N", bf.N);
  bound->add_option("--m", bf.m);
  bound->add_option("--M", bf.M);
  bound->add_option("--L", bf.L);
  bound->add_option("--delta", bf.delta);
  bound->add_option("--T", bf.T, "iterations, or inf");
  bound->add_option("--n", bf.n);
  bound->add_option("--tau", bf.tau);
  bound->add_option("--sigma", bf.sigma);
  bound->add_option("--w2-init", bf.w2_init);

  std::string algorithm = "all";
  ComplexityQuery q;
  auto* predict = app.add_subcommand("predict", "predicted mixing/computation");
  predict->add_option("--algorithm", algorithm, "method name or all");
  predict->add_option("--kappa", q.kappa);
  predict->add_option("--d", q.d);
  predict->add_option("--N", q.N);
  predict->add_option("--n", q.n);
  predict->add_option("--epsilon", q.epsilon);

  double rd = 1, rN = 1, reps = 0.1;
  auto* regime = app.add_subcommand("regime", "fastest method for a target accuracy");
  regime->add_option("--d", rd);
  regime->add_option("--N", rN);
  regime->add_option("--epsilon", reps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*datagen) return run_datagen(common, ov);
    if (*sample) return run_sample(common, ov, emit_velocity);
    if (*minimize) return run_minimize(common, ov);
    if (*experiment) return run_experiment_cmd(common, ov);
    if (*bound) return run_bound(bf);
    if (*predict) return run_predict(algorithm, q);
    if (*regime) return run_regime(rd, rN, reps);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
