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

#include "vrlmc/estimators.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vrlmc/error.hpp"

namespace vrlmc {

namespace {

void check_batch(const SumPotential& potential, const MiniBatch& batch) {
  if (batch.indices.empty()) throw ConfigError("mini-batch is empty");
  const std::size_t n = potential.num_components();
  for (std::size_t i : batch.indices) {
    if (i >= n)
      throw std::out_of_range("batch index " + std::to_string(i) +
                              " out of range");
  }
}

void check_point(const SumPotential& potential, std::span<const double> x) {
  if (x.size() != potential.dim())
    throw std::invalid_argument("dimension mismatch: expected " +
                                std::to_string(potential.dim()) + ", got " +
                                std::to_string(x.size()));
}

double batch_scale(const SumPotential& potential, const MiniBatch& batch) {
  return static_cast<double>(potential.num_components()) /
         static_cast<double>(batch.size());
}

// acc += sum_{i in batch} (grad f_i(x) - grad f_i(y)). Each difference is
// formed before accumulation so x == y contributes exactly zero.
void add_batch_differences(const SumPotential& potential,
                           std::span<const double> x, std::span<const double> y,
                           const MiniBatch& batch, std::vector<double>& scratch,
                           std::span<double> acc) {
  const std::size_t d = potential.dim();
  scratch.assign(2 * d, 0.0);
  std::span<double> gx(scratch.data(), d);
  std::span<double> gy(scratch.data() + d, d);
  for (std::size_t i : batch.indices) {
    std::fill(gx.begin(), gx.end(), 0.0);
    std::fill(gy.begin(), gy.end(), 0.0);
    potential.add_component_gradient(i, x, 1.0, gx);
    potential.add_component_gradient(i, y, 1.0, gy);
    for (std::size_t j = 0; j < d; ++j) acc[j] += gx[j] - gy[j];
  }
}

void add_prior_difference(const SumPotential& potential,
                          std::span<const double> x, std::span<const double> y,
                          std::vector<double>& scratch, std::span<double> out) {
  if (!potential.has_prior()) return;
  const std::size_t d = potential.dim();
  scratch.assign(2 * d, 0.0);
  std::span<double> px(scratch.data(), d);
  std::span<double> py(scratch.data() + d, d);
  potential.add_prior_gradient(x, 1.0, px);
  potential.add_prior_gradient(y, 1.0, py);
  for (std::size_t j = 0; j < d; ++j) out[j] += px[j] - py[j];
}

}  // namespace

MiniBatch draw_batch(std::size_t num_components, std::size_t batch_size,
                     Rng& rng) {
  MiniBatch batch;
  draw_batch(num_components, batch_size, rng, batch);
  return batch;
}

void draw_batch(std::size_t num_components, std::size_t batch_size, Rng& rng,
                MiniBatch& batch) {
  if (batch_size == 0) throw ConfigError("batch size must be at least 1");
  if (num_components == 0) throw ConfigError("no components to sample from");
  batch.indices.resize(batch_size);
  for (std::size_t& i : batch.indices) i = rng.uniform_index(num_components);
}

// ---------------------------------------------------------------------------

Vector sgld_estimate(const SumPotential& potential, std::span<const double> x,
                     const MiniBatch& batch) {
  check_point(potential, x);
  check_batch(potential, batch);
  Vector out(potential.dim());
  sgld_estimate(potential, x, batch, out);
  return out;
}

void sgld_estimate(const SumPotential& potential, std::span<const double> x,
                   const MiniBatch& batch, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const double scale = batch_scale(potential, batch);
  for (std::size_t i : batch.indices)
    potential.add_component_gradient(i, x, scale, out);
  potential.add_prior_gradient(x, 1.0, out);
}

// ---------------------------------------------------------------------------

void SagaState::initialize(const SumPotential& potential,
                           std::span<const double> x0) {
  check_point(potential, x0);
  rows_ = potential.num_components();
  dim_ = potential.dim();
  table_.assign(rows_ * dim_, 0.0);
  sum_.assign(dim_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::span<double> g(table_.data() + i * dim_, dim_);
    potential.add_component_gradient(i, x0, 1.0, g);
    axpy(1.0, g, sum_);
  }
  init_point_.assign(x0.begin(), x0.end());
  queries_ += rows_;
}

void SagaState::check_ready(const SumPotential& potential,
                            std::span<const double> x) const {
  if (!initialized()) throw ConfigError("SAGA table is not initialized");
  if (potential.num_components() != rows_ || potential.dim() != dim_)
    throw std::invalid_argument("SAGA table does not match the potential");
  check_point(potential, x);
}

// (N/n) sum_{i in S} (grad f_i(x) - g^i), gradients left in scratch_ rows.
void SagaState::correction(const SumPotential& potential,
                           std::span<const double> x, const MiniBatch& batch,
                           std::span<double> out) const {
  const std::size_t n = batch.size();
  scratch_.assign(n * dim_, 0.0);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t b = 0; b < n; ++b) {
    const std::size_t i = batch.indices[b];
    std::span<double> g(scratch_.data() + b * dim_, dim_);
    potential.add_component_gradient(i, x, 1.0, g);
    const double* stored = table_.data() + i * dim_;
    for (std::size_t j = 0; j < dim_; ++j) out[j] += g[j] - stored[j];
  }
  const double scale = batch_scale(potential, batch);
  for (double& v : out) v *= scale;
}

Vector SagaState::estimate(const SumPotential& potential,
                           std::span<const double> x,
                           const MiniBatch& batch) const {
  check_ready(potential, x);
  check_batch(potential, batch);
  Vector out(dim_);
  correction(potential, x, batch, out);
  for (std::size_t j = 0; j < dim_; ++j) out[j] += sum_[j];
  potential.add_prior_gradient(x, 1.0, out);
  return out;
}

Vector SagaState::estimate_and_update(const SumPotential& potential,
                                      std::span<const double> x,
                                      const MiniBatch& batch) {
  check_ready(potential, x);
  check_batch(potential, batch);
  Vector out(dim_);
  estimate_and_update(potential, x, batch, out);
  return out;
}

void SagaState::estimate_and_update(const SumPotential& potential,
                                    std::span<const double> x,
                                    const MiniBatch& batch,
                                    std::span<double> out) {
  correction(potential, x, batch, out);
  for (std::size_t j = 0; j < dim_; ++j) out[j] += sum_[j];
  potential.add_prior_gradient(x, 1.0, out);
  queries_ += batch.size();

  // sum += new - current; a second write of the same row adds zero.
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const std::size_t i = batch.indices[b];
    const double* fresh = scratch_.data() + b * dim_;
    double* stored = table_.data() + i * dim_;
    for (std::size_t j = 0; j < dim_; ++j) {
      sum_[j] += fresh[j] - stored[j];
      stored[j] = fresh[j];
    }
  }
}

double SagaState::table_sum_drift() const {
  Vector exact(dim_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) axpy(1.0, row(i), exact);
  double scale = 1.0;
  double err = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    scale = std::max(scale, std::abs(exact[j]));
    err = std::max(err, std::abs(exact[j] - sum_[j]));
  }
  return err / scale;
}

// ---------------------------------------------------------------------------

SvrgState::SvrgState(std::size_t tau, SvrgOption option)
    : tau_(tau), option_(option) {
  if (tau_ == 0) throw ConfigError("SVRG epoch length tau must be >= 1");
}

void SvrgState::record(std::span<const double> x) {
  if (option_ != SvrgOption::kI) return;
  if (history_dim_ == 0) {
    history_dim_ = x.size();
    history_.assign(tau_ * history_dim_, 0.0);
  }
  std::copy(x.begin(), x.end(), history_.begin() + history_head_ * history_dim_);
  history_head_ = (history_head_ + 1) % tau_;
  history_count_ = std::min(history_count_ + 1, tau_);
}

std::span<const double> SvrgState::history_at(std::size_t age) const {
  if (age >= history_count_) throw std::out_of_range("history age out of range");
  const std::size_t slot = (history_head_ + tau_ - 1 - age) % tau_;
  return {history_.data() + slot * history_dim_, history_dim_};
}

Vector SvrgState::refresh(const SumPotential& potential, std::size_t k,
                          std::span<const double> x, Rng& rng) {
  const std::size_t offset =
      option_ == SvrgOption::kI ? rng.uniform_index(tau_) : 0;
  return refresh_at_offset(potential, k, x, offset);
}

Vector SvrgState::refresh_at_offset(const SumPotential& potential,
                                    std::size_t k, std::span<const double> x,
                                    std::size_t offset) {
  if (k % tau_ != 0)
    throw std::logic_error("SVRG refresh requested off an epoch boundary (k=" +
                           std::to_string(k) + ", tau=" +
                           std::to_string(tau_) + ")");
  check_point(potential, x);
  if (option_ == SvrgOption::kI && offset >= tau_)
    throw std::out_of_range("SVRG offset must lie in [0, tau)");

  Vector position(x.begin(), x.end());
  if (option_ == SvrgOption::kI && history_count_ > 0 && offset > 0) {
    // Offsets beyond the recorded history fall back to the oldest entry.
    const auto past = history_at(std::min(offset, history_count_ - 1));
    position.assign(past.begin(), past.end());
  }
  anchor_ = position;
  anchor_grad_ = potential.grad_full(anchor_);
  queries_ += potential.num_components();
  ++epochs_;
  history_count_ = 0;
  history_head_ = 0;
  return position;
}

Vector SvrgState::estimate(const SumPotential& potential,
                           std::span<const double> x,
                           const MiniBatch& batch) const {
  if (!has_anchor()) throw ConfigError("SVRG anchor is not set");
  check_point(potential, x);
  check_batch(potential, batch);
  Vector out(potential.dim());
  estimate(potential, x, batch, out);
  return out;
}

void SvrgState::estimate(const SumPotential& potential,
                         std::span<const double> x, const MiniBatch& batch,
                         std::span<double> out) const {
  const std::size_t d = potential.dim();
  Vector acc(d, 0.0);
  add_batch_differences(potential, x, anchor_, batch, scratch_, acc);
  const double scale = batch_scale(potential, batch);
  for (std::size_t j = 0; j < d; ++j) out[j] = anchor_grad_[j] + scale * acc[j];
  add_prior_difference(potential, x, anchor_, scratch_, out);
#ifndef NDEBUG
  if (x.size() == anchor_.size() &&
      std::equal(x.begin(), x.end(), anchor_.begin())) {
    assert(std::equal(out.begin(), out.end(), anchor_grad_.begin()));
  }
#endif
}

// ---------------------------------------------------------------------------

CvState::CvState(const SumPotential& potential, Vector center,
                 double mode_tolerance)
    : center_(std::move(center)), mode_tolerance_(mode_tolerance) {
  check_point(potential, center_);
  center_grad_ = potential.grad_full(center_);
  queries_ += potential.num_components();
  const double gn = norm(center_grad_);
  if (gn > mode_tolerance_)
    throw ConfigError("control-variate centre has gradient norm " +
                      std::to_string(gn) + " above tolerance " +
                      std::to_string(mode_tolerance_));
}

Vector CvState::estimate(const SumPotential& potential,
                         std::span<const double> x,
                         const MiniBatch& batch) const {
  if (!has_center()) throw ConfigError("control-variate centre is not set");
  check_point(potential, x);
  check_batch(potential, batch);
  Vector out(potential.dim());
  estimate(potential, x, batch, out);
  return out;
}

void CvState::estimate(const SumPotential& potential, std::span<const double> x,
                       const MiniBatch& batch, std::span<double> out) const {
  const std::size_t d = potential.dim();
  Vector acc(d, 0.0);
  add_batch_differences(potential, x, center_, batch, scratch_, acc);
  const double scale = batch_scale(potential, batch);
  for (std::size_t j = 0; j < d; ++j) out[j] = center_grad_[j] + scale * acc[j];
  add_prior_difference(potential, x, center_, scratch_, out);
}

// ---------------------------------------------------------------------------

double EstimatorProbe::sigma() const {
  double total = 0.0;
  for (double v : variance) total += v;
  return variance.empty() ? 0.0
                          : std::sqrt(total / static_cast<double>(variance.size()));
}

EstimatorProbe probe_sgld_noise(const SumPotential& potential,
                                std::span<const double> x,
                                std::size_t batch_size, std::size_t draws,
                                Rng& rng) {
  check_point(potential, x);
  if (draws < 2) throw ConfigError("noise probe needs at least two draws");
  const std::size_t d = potential.dim();
  EstimatorProbe probe;
  probe.mean.assign(d, 0.0);
  probe.variance.assign(d, 0.0);
  probe.draws = draws;
  MiniBatch batch;
  Vector g(d);
  // Welford updates.
  for (std::size_t k = 0; k < draws; ++k) {
    draw_batch(potential.num_components(), batch_size, rng, batch);
    sgld_estimate(potential, x, batch, g);
    const double w = 1.0 / static_cast<double>(k + 1);
    for (std::size_t j = 0; j < d; ++j) {
      const double delta = g[j] - probe.mean[j];
      probe.mean[j] += w * delta;
      probe.variance[j] += delta * (g[j] - probe.mean[j]);
    }
  }
  for (double& v : probe.variance) v /= static_cast<double>(draws - 1);
  return probe;
}

}  // namespace vrlmc
