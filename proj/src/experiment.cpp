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

#include "vrlmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "vrlmc/dataset_io.hpp"
#include "vrlmc/error.hpp"
#include "vrlmc/metrics.hpp"
#include "vrlmc/optimizer.hpp"

namespace vrlmc {

namespace {

// Replica id of the long LD reference run, far from any real replica.
constexpr std::uint64_t kReferenceReplica = 0xFFFF'FFFF'0000'0000ULL;

const std::vector<std::string_view> kKnownKeys = {
    "model", "data", "N", "d", "test_rows", "train_fraction", "data_seed",
    "noise_scale", "data_mean", "feature_scale", "lognormal_mu",
    "lognormal_sigma", "prior_variance", "methods", "delta", "batch", "tau",
    "iters", "burn_in", "thin", "step_decay", "min_delta", "replicas", "seed",
    "metric", "target", "eval_every", "heldout_max_samples", "reference_delta",
    "reference_iters", "threads", "out", "curves"};

std::size_t to_size(std::uint64_t v) { return static_cast<std::size_t>(v); }

std::vector<std::size_t> to_sizes(const std::vector<std::uint64_t>& v) {
  return {v.begin(), v.end()};
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string describe(const GridPoint& p) {
  return std::string(to_string(p.method)) + " (delta=" + format_double(p.delta) +
         ", n=" + std::to_string(p.batch) + ", tau=" + std::to_string(p.tau) +
         ")";
}

// At most `cap` row indices spread evenly over [first, last).
std::vector<std::size_t> spread(std::size_t first, std::size_t last,
                                std::size_t cap) {
  std::vector<std::size_t> out;
  const std::size_t count = last - first;
  if (count == 0) return out;
  if (cap == 0 || count <= cap) {
    for (std::size_t i = first; i < last; ++i) out.push_back(i);
    return out;
  }
  for (std::size_t k = 0; k < cap; ++k)
    out.push_back(first + (k * count) / cap);
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) /
                   static_cast<double>(v.size()));
}

// Everything a replica needs to score its samples.
struct MetricContext {
  TargetMetric metric = TargetMetric::kMse;
  std::unique_ptr<LogisticRegressionModel> test;
  Vector reference_mean;
  GaussianSummary exact;
  std::size_t heldout_max_samples = 200;

  // Metric over kept rows [first, last); NaN when too few rows.
  double evaluate(const ChainOutput& chain, std::size_t first,
                  std::size_t last) const {
    const std::size_t d = chain.dim;
    if (last <= first) return std::numeric_limits<double>::quiet_NaN();
    switch (metric) {
      case TargetMetric::kHeldout: {
        const auto rows = spread(first, last, heldout_max_samples);
        std::vector<double> picked;
        picked.reserve(rows.size() * d);
        for (std::size_t r : rows) {
          const auto s = chain.sample(r);
          picked.insert(picked.end(), s.begin(), s.end());
        }
        return heldout_log_prob(*test, picked);
      }
      case TargetMetric::kMse:
        return mse(std::span<const double>(chain.samples)
                       .subspan(first * d, (last - first) * d),
                   d, reference_mean);
      case TargetMetric::kW2:
        if (last - first < 2) return std::numeric_limits<double>::quiet_NaN();
        return w2_gaussian(
            summarize_samples(std::span<const double>(chain.samples)
                                  .subspan(first * d, (last - first) * d),
                              d),
            exact);
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
};

bool reaches(TargetMetric metric, double value, double target) {
  if (std::isnan(value)) return false;
  return higher_is_better(metric) ? value >= target : value <= target;
}

// Reads the delta/batch/tau lists stored under `suffix`.
void read_grid(const KeyValueConfig& kv, const std::string& suffix,
               HyperGrid& grid) {
  if (auto v = kv.get_double_list("delta" + suffix)) grid.deltas = *v;
  if (auto v = kv.get_u64_list("batch" + suffix)) grid.batch_sizes = to_sizes(*v);
  if (auto v = kv.get_u64_list("tau" + suffix)) grid.taus = to_sizes(*v);
}

}  // namespace

TargetMetric parse_target_metric(std::string_view name) {
  if (name == "heldout") return TargetMetric::kHeldout;
  if (name == "mse") return TargetMetric::kMse;
  if (name == "w2") return TargetMetric::kW2;
  throw ConfigError("unknown metric '" + std::string(name) +
                    "' (expected heldout|mse|w2)");
}

std::string_view to_string(TargetMetric metric) {
  switch (metric) {
    case TargetMetric::kHeldout:
      return "heldout";
    case TargetMetric::kMse:
      return "mse";
    case TargetMetric::kW2:
      return "w2";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::from_key_values(const KeyValueConfig& kv) {
  const auto unknown =
      kv.unknown_keys(kKnownKeys, {"delta.", "batch.", "tau."});
  if (!unknown.empty()) {
    std::string msg = "unknown config key(s):";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }

  ExperimentConfig c;
  if (auto v = kv.get("model")) c.model = parse_model_kind(*v);
  if (auto v = kv.get("data"); v && !v->empty()) c.data_path = *v;
  if (auto v = kv.get_u64("N")) c.num_data = to_size(*v);
  if (auto v = kv.get_u64("d")) c.dim = to_size(*v);
  if (auto v = kv.get_u64("test_rows")) c.test_rows = to_size(*v);
  if (auto v = kv.get_double("train_fraction")) c.train_fraction = *v;
  if (auto v = kv.get_u64("data_seed")) c.data_seed = *v;
  if (auto v = kv.get_double("noise_scale")) {
    c.synth.noise_scale = *v;
    c.model_options.noise_scale = *v;
  }
  if (auto v = kv.get_double("data_mean")) c.synth.data_mean = *v;
  if (auto v = kv.get_double("feature_scale")) c.synth.feature_scale = *v;
  if (auto v = kv.get_double("lognormal_mu")) c.synth.lognormal_mu = *v;
  if (auto v = kv.get_double("lognormal_sigma")) c.synth.lognormal_sigma = *v;
  if (auto v = kv.get_double("prior_variance"))
    c.model_options.prior_variance = *v;

  if (auto v = kv.get_list("methods"))
    for (const auto& name : *v) c.methods.push_back(parse_method(name));
  read_grid(kv, "", c.grid);
  for (Method m : c.methods) {
    const std::string suffix = "." + std::string(to_string(m));
    HyperGrid g;
    read_grid(kv, suffix, g);
    if (!g.deltas.empty() || !g.batch_sizes.empty() || !g.taus.empty())
      c.method_grids[m] = g;
  }
  for (const auto& [k, v] : kv.entries()) {
    const auto dot = k.find('.');
    if (dot == std::string::npos) continue;
    const Method m = parse_method(std::string_view(k).substr(dot + 1));
    if (std::find(c.methods.begin(), c.methods.end(), m) == c.methods.end())
      throw ConfigError("'" + k + "' names a method not in 'methods'");
  }

  if (auto v = kv.get_u64("iters")) c.iters = to_size(*v);
  if (auto v = kv.get_u64("burn_in")) c.burn_in = to_size(*v);
  if (auto v = kv.get_u64("thin")) c.thin = to_size(*v);
  if (auto v = kv.get_double("step_decay")) c.step_decay = *v;
  if (auto v = kv.get_double("min_delta")) c.min_delta = *v;
  if (auto v = kv.get_u64("replicas")) c.replicas = to_size(*v);
  if (auto v = kv.get_u64("seed")) c.seed = *v;
  if (auto v = kv.get("metric")) c.metric = parse_target_metric(*v);
  if (auto v = kv.get("target"); v && *v != "none" && !v->empty())
    c.target = parse_double(*v, "target");
  if (auto v = kv.get_u64("eval_every")) c.eval_every = to_size(*v);
  if (auto v = kv.get_u64("heldout_max_samples"))
    c.heldout_max_samples = to_size(*v);
  if (auto v = kv.get_double("reference_delta")) c.reference_delta = *v;
  if (auto v = kv.get_u64("reference_iters")) c.reference_iters = to_size(*v);
  if (auto v = kv.get_u64("threads")) c.threads = to_size(*v);
  if (auto v = kv.get("out")) c.out_path = *v;
  if (auto v = kv.get("curves")) c.curves_path = *v;
  c.validate();
  return c;
}

KeyValueConfig ExperimentConfig::to_key_values() const {
  KeyValueConfig kv;
  kv.set("model", std::string(to_string(model)));
  kv.set("data", data_path.value_or(""));
  kv.set("N", std::to_string(num_data));
  kv.set("d", std::to_string(dim));
  kv.set("test_rows", std::to_string(test_rows));
  kv.set("train_fraction", format_double(train_fraction));
  kv.set("data_seed", std::to_string(data_seed.value_or(seed)));
  kv.set("noise_scale", format_double(model_options.noise_scale));
  kv.set("data_mean", format_double(synth.data_mean));
  kv.set("feature_scale", format_double(synth.feature_scale));
  kv.set("lognormal_mu", format_double(synth.lognormal_mu));
  kv.set("lognormal_sigma", format_double(synth.lognormal_sigma));
  kv.set("prior_variance", format_double(model_options.prior_variance));
  std::string names;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i) names += ',';
    names += to_string(methods[i]);
  }
  kv.set("methods", names);
  if (!grid.deltas.empty()) kv.set("delta", join_doubles(grid.deltas));
  if (!grid.batch_sizes.empty()) kv.set("batch", join_sizes(grid.batch_sizes));
  if (!grid.taus.empty()) kv.set("tau", join_sizes(grid.taus));
  for (const auto& [m, g] : method_grids) {
    const std::string suffix = "." + std::string(to_string(m));
    if (!g.deltas.empty()) kv.set("delta" + suffix, join_doubles(g.deltas));
    if (!g.batch_sizes.empty())
      kv.set("batch" + suffix, join_sizes(g.batch_sizes));
    if (!g.taus.empty()) kv.set("tau" + suffix, join_sizes(g.taus));
  }
  kv.set("iters", std::to_string(iters));
  kv.set("burn_in", std::to_string(burn_in.value_or(iters / 10)));
  kv.set("thin", std::to_string(thin));
  kv.set("step_decay", format_double(step_decay));
  kv.set("min_delta", format_double(min_delta));
  kv.set("replicas", std::to_string(replicas));
  kv.set("seed", std::to_string(seed));
  kv.set("metric", std::string(to_string(metric)));
  kv.set("target", target ? format_double(*target) : "none");
  kv.set("eval_every",
         std::to_string(eval_every ? eval_every : std::max<std::size_t>(1, iters / 100)));
  kv.set("heldout_max_samples", std::to_string(heldout_max_samples));
  if (reference_delta) kv.set("reference_delta", format_double(*reference_delta));
  kv.set("reference_iters", std::to_string(reference_iters.value_or(10 * iters)));
  kv.set("threads", std::to_string(threads));
  kv.set("out", out_path);
  if (!curves_path.empty()) kv.set("curves", curves_path);
  return kv;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("config lists no methods");
  if (replicas == 0) throw ConfigError("replicas must be >= 1");
  if (iters == 0) throw ConfigError("iters must be >= 1");
  if (thin == 0) throw ConfigError("thin must be >= 1");
  if (threads == 0) throw ConfigError("threads must be >= 1");
  for (Method m : methods) {
    const auto it = method_grids.find(m);
    const bool own = it != method_grids.end() && !it->second.deltas.empty();
    if (!own && grid.deltas.empty())
      throw ConfigError("no delta grid for " + std::string(to_string(m)));
  }
  if (metric == TargetMetric::kHeldout && model != ModelKind::kLogistic)
    throw ConfigError("heldout metric requires the logistic model");
  if (metric == TargetMetric::kW2 && model != ModelKind::kGaussian)
    throw ConfigError("w2 metric requires the gaussian model");
}

bool grid_less(const GridPoint& a, const GridPoint& b) {
  if (a.delta != b.delta) return a.delta < b.delta;
  if (a.batch != b.batch) return a.batch < b.batch;
  return a.tau < b.tau;
}

std::vector<GridPoint> expand_grid(const ExperimentConfig& config,
                                   std::size_t num_components) {
  std::vector<GridPoint> points;
  for (Method m : config.methods) {
    HyperGrid g = config.grid;
    if (auto it = config.method_grids.find(m); it != config.method_grids.end()) {
      if (!it->second.deltas.empty()) g.deltas = it->second.deltas;
      if (!it->second.batch_sizes.empty())
        g.batch_sizes = it->second.batch_sizes;
      if (!it->second.taus.empty()) g.taus = it->second.taus;
    }
    std::vector<std::size_t> batches = g.batch_sizes;
    if (!uses_batches(m)) batches = {num_components};
    else if (batches.empty()) batches = {10};
    for (double delta : g.deltas) {
      for (std::size_t n : batches) {
        std::vector<std::size_t> taus = g.taus;
        if (!is_svrg(m)) taus = {0};
        else if (taus.empty()) taus = {(num_components + n - 1) / n};
        for (std::size_t tau : taus) points.push_back({m, delta, n, tau});
      }
    }
  }
  return points;
}

ExperimentResults run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::uint64_t data_seed = config.data_seed.value_or(config.seed);
  const bool heldout = config.metric == TargetMetric::kHeldout;

  Dataset train;
  Dataset test;
  if (config.data_path) {
    Dataset all = load_csv_dataset(*config.data_path, config.model);
    if (heldout) {
      auto parts = split_dataset(all, config.train_fraction, data_seed);
      train = std::move(parts.train);
      test = std::move(parts.test);
    } else {
      train = std::move(all);
    }
  } else {
    const std::size_t extra =
        heldout ? (config.test_rows ? config.test_rows
                                    : std::max<std::size_t>(1, config.num_data / 4))
                : 0;
    Dataset all = generate_synthetic(config.model, config.num_data + extra,
                                     config.dim, data_seed, config.synth);
    if (heldout) {
      const double fraction = static_cast<double>(config.num_data) /
                              static_cast<double>(config.num_data + extra);
      auto parts = split_dataset(all, fraction, data_seed);
      train = std::move(parts.train);
      test = std::move(parts.test);
    } else {
      train = std::move(all);
    }
  }

  const auto potential = make_potential(train, config.model_options);
  const std::size_t num = potential->num_components();
  const std::size_t burn_in = config.burn_in.value_or(config.iters / 10);
  const std::size_t eval_every =
      config.eval_every ? config.eval_every
                        : std::max<std::size_t>(1, config.iters / 100);
  const bool target_mode = config.target.has_value();
  const bool want_curves = target_mode || !config.curves_path.empty();

  MetricContext ctx;
  ctx.metric = config.metric;
  ctx.heldout_max_samples = config.heldout_max_samples;
  switch (config.metric) {
    case TargetMetric::kHeldout:
      ctx.test = std::make_unique<LogisticRegressionModel>(
          test.features, test.labels, test.cols,
          config.model_options.prior_variance);
      break;
    case TargetMetric::kW2: {
      const auto& g = dynamic_cast<const GaussianTarget&>(*potential);
      ctx.exact = isotropic_gaussian(g.posterior_mean(), g.posterior_variance());
      break;
    }
    case TargetMetric::kMse:
      if (const auto* g = dynamic_cast<const GaussianTarget*>(potential.get())) {
        ctx.reference_mean = g->posterior_mean();
      } else {
        double ref_delta = std::numeric_limits<double>::infinity();
        if (config.reference_delta) {
          ref_delta = *config.reference_delta;
        } else {
          for (const auto& p : expand_grid(config, num))
            ref_delta = std::min(ref_delta, p.delta);
        }
        ChainConfig rc;
        rc.delta = ref_delta;
        rc.iters = config.reference_iters.value_or(10 * config.iters);
        rc.seed = config.seed;
        rc.replica = kReferenceReplica;
        ctx.reference_mean =
            run_chain(Method::kLD, *potential, rc).diagnostics.sample_mean;
      }
      break;
  }

  ExperimentResults results;
  results.num_components = num;

  std::optional<Vector> center;
  const bool any_cv = std::any_of(config.methods.begin(), config.methods.end(),
                                  [](Method m) { return needs_center(m); });
  if (any_cv) {
    MinimizeOptions mo;
    mo.seed = config.seed;
    const ModeResult mode = saga_sgd_minimize(*potential, mo);
    if (!mode.converged)
      throw NumericalError("mode search for control variates failed: " +
                           mode.diagnostic);
    center = mode.x_star;
    results.center_queries = mode.gradient_queries;
  }

  const auto points = expand_grid(config, num);
  const std::size_t total = points.size() * config.replicas;
  results.runs.resize(total);
  std::vector<std::exception_ptr> errors(total);
  const double N = static_cast<double>(num);

  auto run_task = [&](std::size_t task) {
    const GridPoint& p = points[task / config.replicas];
    ReplicaResult& r = results.runs[task];
    r.point = p;
    r.replica = task % config.replicas;
    try {
      ChainConfig cc;
      cc.delta = p.delta;
      cc.batch_size = uses_batches(p.method) ? p.batch : 1;
      cc.tau = p.tau;
      cc.iters = config.iters;
      cc.burn_in = 0;
      cc.thin = config.thin;
      cc.seed = config.seed;
      cc.replica = r.replica;
      cc.step_decay = config.step_decay;
      cc.min_delta = config.min_delta;
      const std::uint64_t extra = needs_center(p.method) ? results.center_queries : 0;
      if (needs_center(p.method)) cc.center = center;
      std::vector<std::pair<std::size_t, std::uint64_t>> checkpoints;
      if (want_curves) {
        cc.observe_every = eval_every;
        cc.observer = [&checkpoints](const ChainProgress& pr) {
          checkpoints.emplace_back(pr.iteration, pr.gradient_queries);
        };
      }
      const ChainOutput chain = run_chain(p.method, *potential, cc);
      const auto& iters = chain.sample_iters;
      auto first_after = [&](std::size_t it) {
        return static_cast<std::size_t>(
            std::upper_bound(iters.begin(), iters.end(), it) - iters.begin());
      };
      r.queries = chain.gradient_queries + extra;
      r.passes = static_cast<double>(r.queries) / N;
      r.metric = ctx.evaluate(chain, first_after(burn_in), iters.size());
      if (std::isnan(r.metric))
        throw ConfigError("no samples kept after burn-in");
      for (const auto& [it, q] : checkpoints) {
        CurvePoint cp;
        cp.passes = static_cast<double>(q + extra) / N;
        cp.metric = ctx.evaluate(chain, first_after(it / 2), first_after(it));
        r.curve.push_back(cp);
        if (target_mode && !r.passes_to_target &&
            reaches(config.metric, cp.metric, *config.target))
          r.passes_to_target = cp.passes;
      }
      r.ok = true;
    } catch (const NumericalError& e) {
      r.ok = false;
      r.error = describe(p) + ": " + e.what();
    } catch (const ConfigError& e) {
      errors[task] = std::make_exception_ptr(
          ConfigError(describe(p) + ": " + e.what()));
    } catch (...) {
      errors[task] = std::current_exception();
    }
  };

  const std::size_t workers = std::min(config.threads, total);
  if (workers <= 1) {
    for (std::size_t t = 0; t < total; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < total; t = next.fetch_add(1))
          run_task(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  results.aggregates = aggregate_runs(results.runs, target_mode);
  return results;
}

std::vector<AggregateResult> aggregate_runs(const std::vector<ReplicaResult>& runs,
                                            bool target_mode) {
  std::vector<AggregateResult> out;
  std::size_t i = 0;
  while (i < runs.size()) {
    std::size_t j = i;
    while (j < runs.size() && runs[j].point == runs[i].point) ++j;
    AggregateResult a;
    a.point = runs[i].point;
    a.replicas = j - i;
    std::vector<double> metrics, passes, queries, hits;
    for (std::size_t k = i; k < j; ++k) {
      if (!runs[k].ok) {
        ++a.failures;
        continue;
      }
      metrics.push_back(runs[k].metric);
      passes.push_back(runs[k].passes);
      queries.push_back(static_cast<double>(runs[k].queries));
      if (runs[k].passes_to_target) hits.push_back(*runs[k].passes_to_target);
    }
    if (a.failures == 0) {
      a.metric_mean = mean_of(metrics);
      a.metric_stderr = stderr_of(metrics);
      a.passes_mean = mean_of(passes);
      a.passes_stderr = stderr_of(passes);
      a.queries_mean = mean_of(queries);
      if (target_mode && hits.size() == a.replicas) {
        a.passes_to_target_mean = mean_of(hits);
        a.passes_to_target_stderr = stderr_of(hits);
      }
    }
    out.push_back(std::move(a));
    i = j;
  }
  return out;
}

void write_results_csv(std::ostream& out, const ExperimentConfig& config,
                       const ExperimentResults& results) {
  const bool target_mode = config.target.has_value();
  const std::string seed = std::to_string(config.seed);
  const std::string na = "NA";
  out << "method,delta,n,tau,replica,metric,passes,queries,seed,"
         "metric_stderr,passes_stderr\n";
  auto prefix = [&](const GridPoint& p) {
    out << to_string(p.method) << ',' << format_double(p.delta) << ','
        << p.batch << ',' << p.tau << ',';
  };
  std::size_t run = 0;
  for (const auto& agg : results.aggregates) {
    for (std::size_t k = 0; k < agg.replicas; ++k, ++run) {
      const ReplicaResult& r = results.runs[run];
      prefix(r.point);
      out << r.replica << ',';
      if (r.ok) {
        out << format_double(r.metric) << ',';
        if (target_mode)
          out << (r.passes_to_target ? format_double(*r.passes_to_target) : na);
        else
          out << format_double(r.passes);
        out << ',' << r.queries;
      } else {
        out << na << ',' << na << ',' << na;
      }
      out << ',' << seed << ",,\n";
    }
    prefix(agg.point);
    out << "agg,";
    if (agg.metric_mean) {
      out << format_double(*agg.metric_mean) << ',';
      if (target_mode)
        out << (agg.passes_to_target_mean
                    ? format_double(*agg.passes_to_target_mean)
                    : na);
      else
        out << format_double(agg.passes_mean);
      out << ',' << format_double(agg.queries_mean) << ',' << seed << ','
          << format_double(agg.metric_stderr) << ',';
      if (target_mode)
        out << (agg.passes_to_target_mean
                    ? format_double(agg.passes_to_target_stderr)
                    : na);
      else
        out << format_double(agg.passes_stderr);
    } else {
      out << na << ',' << na << ',' << na << ',' << seed << ',' << na << ','
          << na;
    }
    out << '\n';
  }
}

void write_curves_csv(std::ostream& out, const ExperimentResults& results) {
  out << "method,delta,n,tau,replica,passes,metric\n";
  for (const auto& r : results.runs) {
    for (const auto& c : r.curve) {
      out << to_string(r.point.method) << ',' << format_double(r.point.delta)
          << ',' << r.point.batch << ',' << r.point.tau << ',' << r.replica
          << ',' << format_double(c.passes) << ',' << format_double(c.metric)
          << '\n';
    }
  }
}

std::vector<GridChoice> select_best(const ExperimentConfig& config,
                                    const ExperimentResults& results) {
  const bool target_mode = config.target.has_value();
  std::vector<GridChoice> best;
  for (Method m : config.methods) {
    std::optional<GridChoice> choice;
    for (const auto& agg : results.aggregates) {
      if (agg.point.method != m || !agg.metric_mean) continue;
      double score = 0.0;
      bool lower_better = true;
      if (target_mode) {
        if (!agg.passes_to_target_mean) continue;
        score = *agg.passes_to_target_mean;
      } else {
        score = *agg.metric_mean;
        lower_better = !higher_is_better(config.metric);
      }
      if (!std::isfinite(score)) continue;
      const bool better =
          !choice || (lower_better ? score < choice->score : score > choice->score) ||
          (score == choice->score && grid_less(agg.point, choice->point));
      if (better) choice = GridChoice{agg.point, score};
    }
    if (!choice)
      throw NumericalError("all grid points failed for " +
                           std::string(to_string(m)));
    best.push_back(*choice);
  }
  return best;
}

std::vector<GridChoice> grid_search(const ExperimentConfig& config) {
  return select_best(config, run_experiment(config));
}

}  // namespace vrlmc
