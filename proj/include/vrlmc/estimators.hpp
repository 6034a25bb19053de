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

// Stochastic estimates of grad f for sum-decomposable potentials.
//
// Every estimator adds the prior gradient exactly and subsamples only the
// data components; all four are unbiased for grad_full(x) given their
// auxiliary state.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "vrlmc/linalg.hpp"
#include "vrlmc/potentials.hpp"
#include "vrlmc/rng.hpp"

namespace vrlmc {

/// n component indices drawn uniformly with replacement from [0, N).
struct MiniBatch {
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
};

MiniBatch draw_batch(std::size_t num_components, std::size_t batch_size,
                     Rng& rng);
/// Allocation-free variant; `batch` is resized to `batch_size`.
void draw_batch(std::size_t num_components, std::size_t batch_size, Rng& rng,
                MiniBatch& batch);

/// grad f_0(x) + (N/n) sum_{i in batch} grad f_i(x). Costs n queries.
Vector sgld_estimate(const SumPotential& potential, std::span<const double> x,
                     const MiniBatch& batch);
void sgld_estimate(const SumPotential& potential, std::span<const double> x,
                   const MiniBatch& batch, std::span<double> out);

/**
 * Stored per-component gradients for the SAGA estimator.
 *
 * The estimate is grad f_0(x) + sum_i g^i + (N/n) sum_{i in S} (grad f_i(x)
 * - g^i), where the correction counts duplicate indices in S once per
 * occurrence. Afterwards every drawn row is overwritten with the gradient
 * just computed; repeated writes are idempotent. `table_sum` is maintained
 * incrementally.
 */
class SagaState {
 public:
  SagaState() = default;

  /// g^i = grad f_i(x0) for every i. Costs N queries.
  void initialize(const SumPotential& potential, std::span<const double> x0);
  bool initialized() const { return !table_.empty(); }

  /// Estimate without touching the table.
  Vector estimate(const SumPotential& potential, std::span<const double> x,
                  const MiniBatch& batch) const;
  Vector estimate_and_update(const SumPotential& potential,
                             std::span<const double> x, const MiniBatch& batch);
  void estimate_and_update(const SumPotential& potential,
                           std::span<const double> x, const MiniBatch& batch,
                           std::span<double> out);

  std::size_t num_rows() const { return rows_; }
  std::span<const double> row(std::size_t i) const {
    return {table_.data() + i * dim_, dim_};
  }
  std::span<const double> table_sum() const { return sum_; }
  std::span<const double> initialized_at() const { return init_point_; }
  /// max_j |sum_j - recomputed_j| / max(1, max_j |recomputed_j|).
  double table_sum_drift() const;
  std::uint64_t queries() const { return queries_; }

 private:
  void check_ready(const SumPotential& potential,
                   std::span<const double> x) const;
  void correction(const SumPotential& potential, std::span<const double> x,
                  const MiniBatch& batch, std::span<double> out) const;

  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> table_;
  Vector sum_;
  Vector init_point_;
  mutable std::vector<double> scratch_;
  std::uint64_t queries_ = 0;
};

enum class SvrgOption { kI, kII };

/**
 * Anchor point, its full gradient and (Option I) the ring buffer of the
 * last tau chain positions, newest last.
 *
 * Refreshes happen at iterations k with k mod tau == 0, including k = 0.
 * Option I resets the chain to x_{k - l} with l ~ unif{0..tau-1}, where
 * l = 0 is the current position; Option II anchors at the current position.
 * Both then recompute the anchor gradient (N queries).
 */
class SvrgState {
 public:
  SvrgState(std::size_t tau, SvrgOption option);

  std::size_t tau() const { return tau_; }
  SvrgOption option() const { return option_; }

  /// Appends a chain position to the history (Option I only; no-op for II).
  void record(std::span<const double> x);

  /// Draws l for Option I and forwards to `refresh_at_offset`.
  Vector refresh(const SumPotential& potential, std::size_t k,
                 std::span<const double> x, Rng& rng);
  /// Refresh with an explicit offset l (ignored for Option II). Returns the
  /// chain position after the refresh.
  Vector refresh_at_offset(const SumPotential& potential, std::size_t k,
                           std::span<const double> x, std::size_t offset);

  bool has_anchor() const { return !anchor_.empty(); }
  Vector estimate(const SumPotential& potential, std::span<const double> x,
                  const MiniBatch& batch) const;
  void estimate(const SumPotential& potential, std::span<const double> x,
                const MiniBatch& batch, std::span<double> out) const;

  std::span<const double> anchor() const { return anchor_; }
  std::span<const double> anchor_grad() const { return anchor_grad_; }
  std::size_t history_size() const { return history_count_; }
  /// `age` 0 is the newest recorded position.
  std::span<const double> history_at(std::size_t age) const;
  std::size_t epochs() const { return epochs_; }
  std::uint64_t queries() const { return queries_; }

 private:
  std::size_t tau_;
  SvrgOption option_;
  Vector anchor_;
  Vector anchor_grad_;
  std::vector<double> history_;
  std::size_t history_dim_ = 0;
  std::size_t history_head_ = 0;
  std::size_t history_count_ = 0;
  std::size_t epochs_ = 0;
  mutable std::vector<double> scratch_;
  std::uint64_t queries_ = 0;
};

/// Control-variate estimator centred at an approximate mode x*.
class CvState {
 public:
  CvState() = default;
  /// Computes grad_full(center) (N queries). Throws ConfigError when its
  /// norm exceeds `mode_tolerance`.
  CvState(const SumPotential& potential, Vector center,
          double mode_tolerance = std::numeric_limits<double>::infinity());

  bool has_center() const { return !center_.empty(); }
  Vector estimate(const SumPotential& potential, std::span<const double> x,
                  const MiniBatch& batch) const;
  void estimate(const SumPotential& potential, std::span<const double> x,
                const MiniBatch& batch, std::span<double> out) const;

  std::span<const double> center() const { return center_; }
  std::span<const double> center_grad() const { return center_grad_; }
  double mode_tolerance() const { return mode_tolerance_; }
  std::uint64_t queries() const { return queries_; }

 private:
  Vector center_;
  Vector center_grad_;
  double mode_tolerance_ = 0.0;
  mutable std::vector<double> scratch_;
  std::uint64_t queries_ = 0;
};

/// Monte Carlo summary of an estimator at a fixed point.
struct EstimatorProbe {
  Vector mean;
  Vector variance;  ///< Per-coordinate sample variance.
  std::size_t draws = 0;
  /// sigma with sum_j variance_j = sigma^2 d, the noise scale used by the
  /// SGLD bound.
  double sigma() const;
};

/// Probes the SGLD estimator with `draws` independent batches of size n.
EstimatorProbe probe_sgld_noise(const SumPotential& potential,
                                std::span<const double> x,
                                std::size_t batch_size, std::size_t draws,
                                Rng& rng);

}  // namespace vrlmc
