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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vrlmc/config.hpp"
#include "vrlmc/potentials.hpp"
#include "vrlmc/samplers.hpp"

namespace vrlmc {

enum class TargetMetric { kHeldout, kMse, kW2 };

TargetMetric parse_target_metric(std::string_view name);
std::string_view to_string(TargetMetric metric);

/// True when larger values of `metric` are better.
constexpr bool higher_is_better(TargetMetric metric) {
  return metric == TargetMetric::kHeldout;
}

/// Hyperparameter lists. Empty lists fall back to the shared grid, then to
/// defaults: batch 10, tau ceil(N/n).
struct HyperGrid {
  std::vector<double> deltas;
  std::vector<std::size_t> batch_sizes;
  std::vector<std::size_t> taus;
};

struct ExperimentConfig {
  ModelKind model = ModelKind::kLogistic;
  std::optional<std::string> data_path;  ///< Synthetic data when unset.
  std::size_t num_data = 600;            ///< Synthetic training rows.
  std::size_t dim = 5;                   ///< Synthetic dimension.
  std::size_t test_rows = 0;  ///< Synthetic held-out rows; default N/4.
  double train_fraction = 0.8;  ///< Held-out split of file data.
  std::optional<std::uint64_t> data_seed;  ///< Defaults to `seed`.
  SyntheticParams synth;
  ModelOptions model_options;

  std::vector<Method> methods;
  HyperGrid grid;
  std::map<Method, HyperGrid> method_grids;

  std::size_t iters = 1000;
  std::optional<std::size_t> burn_in;  ///< Default iters/10.
  std::size_t thin = 1;
  double step_decay = 1.0;
  double min_delta = 0.0;
  std::size_t replicas = 1;
  std::uint64_t seed = 0;

  TargetMetric metric = TargetMetric::kMse;
  /// Passes-to-target mode: report the first checkpoint at which the
  /// trailing-window metric reaches this value.
  std::optional<double> target;
  std::size_t eval_every = 0;          ///< Checkpoint stride; default iters/100.
  std::size_t heldout_max_samples = 200;  ///< Posterior draws per evaluation.

  /// Long LD run supplying the reference mean for mse on non-Gaussian models.
  std::optional<double> reference_delta;
  std::optional<std::size_t> reference_iters;  ///< Default 10 * iters.

  std::size_t threads = 1;
  std::string out_path;
  std::string curves_path;  ///< Optional per-checkpoint metric curves.

  /// Recognised keys: model, data, N, d, test_rows, train_fraction,
  /// data_seed, noise_scale, data_mean, feature_scale, lognormal_mu,
  /// lognormal_sigma, prior_variance, methods, delta, batch, tau (each also
  /// as `delta.<METHOD>` etc.), iters, burn_in, thin, step_decay, min_delta,
  /// replicas, seed, metric, target, eval_every, heldout_max_samples,
  /// reference_delta, reference_iters, threads, out, curves.
  static ExperimentConfig from_key_values(const KeyValueConfig& kv);
  /// Every setting with defaults filled in.
  KeyValueConfig to_key_values() const;
  void validate() const;
};

struct GridPoint {
  Method method = Method::kLD;
  double delta = 0.0;
  std::size_t batch = 0;
  std::size_t tau = 0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// (delta, n, tau) lexicographic order, the grid-search tie-breaker.
bool grid_less(const GridPoint& a, const GridPoint& b);

struct CurvePoint {
  double passes = 0.0;
  double metric = 0.0;
};

struct ReplicaResult {
  GridPoint point;
  std::size_t replica = 0;
  bool ok = false;
  std::string error;
  double metric = 0.0;
  double passes = 0.0;
  std::uint64_t queries = 0;
  std::optional<double> passes_to_target;
  std::vector<CurvePoint> curve;
};

struct AggregateResult {
  GridPoint point;
  std::size_t replicas = 0;
  std::size_t failures = 0;
  /// Unset when any replica failed.
  std::optional<double> metric_mean;
  double metric_stderr = 0.0;
  double passes_mean = 0.0;
  double passes_stderr = 0.0;
  double queries_mean = 0.0;
  /// Target mode: unset unless every replica reached the target.
  std::optional<double> passes_to_target_mean;
  double passes_to_target_stderr = 0.0;
};

struct ExperimentResults {
  std::size_t num_components = 0;
  std::uint64_t center_queries = 0;
  std::vector<ReplicaResult> runs;  ///< Grid-point major, replica minor.
  std::vector<AggregateResult> aggregates;
};

/// Grid points in config order: methods, then deltas, batch sizes, taus.
std::vector<GridPoint> expand_grid(const ExperimentConfig& config,
                                   std::size_t num_components);

/// Runs every (grid point, replica). Sampler divergence marks that run
/// failed; configuration errors propagate with the grid point attached.
ExperimentResults run_experiment(const ExperimentConfig& config);

/// Mean and standard error over replica rows, recomputed from `runs`.
std::vector<AggregateResult> aggregate_runs(const std::vector<ReplicaResult>& runs,
                                            bool target_mode);

/// Columns: method,delta,n,tau,replica,metric,passes,queries,seed,
/// metric_stderr,passes_stderr. In target mode `passes` is the
/// passes-to-target. Missing values print as NA.
void write_results_csv(std::ostream& out, const ExperimentConfig& config,
                       const ExperimentResults& results);
void write_curves_csv(std::ostream& out, const ExperimentResults& results);

struct GridChoice {
  GridPoint point;
  double score = 0.0;  ///< Mean metric, or mean passes-to-target.
};

/// Best aggregate per method: fewest passes to target in target mode, else
/// argmax held-out / argmin mse and w2. Points with failed replicas are
/// skipped. Throws NumericalError if a method has no usable point.
std::vector<GridChoice> select_best(const ExperimentConfig& config,
                                    const ExperimentResults& results);
std::vector<GridChoice> grid_search(const ExperimentConfig& config);

}  // namespace vrlmc
