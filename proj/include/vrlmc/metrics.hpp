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
#include <span>
#include <vector>

#include "vrlmc/linalg.hpp"
#include "vrlmc/potentials.hpp"
#include "vrlmc/samplers.hpp"

namespace vrlmc {

/// Mean and covariance of a distribution (sample moments or exact).
struct GaussianSummary {
  Vector mean;
  SquareMatrix cov;

  std::size_t dim() const { return mean.size(); }
};

/// Isotropic N(mean, variance I).
GaussianSummary isotropic_gaussian(Vector mean, double variance);

/// Sample mean and (n-1)-normalised covariance of `count` row-major samples.
GaussianSummary summarize_samples(std::span<const double> samples,
                                  std::size_t dim);
GaussianSummary summarize_samples(const ChainOutput& chain);

/// Closed-form W2 between Gaussians,
/// sqrt(|mu_a - mu_b|^2 + tr(S_a + S_b - 2 (S_b^1/2 S_a S_b^1/2)^1/2)),
/// with both square roots taken by Jacobi eigendecomposition. d <= 64.
double w2_gaussian(const GaussianSummary& a, const GaussianSummary& b);

/// Exact W2 between equal-size 1-D empirical measures (sorted coupling).
double w2_empirical_1d(std::span<const double> a, std::span<const double> b);

/// Root mean ||a_k - b_k||^2 over paired rows: the W2 upper bound given by
/// the coupling that pairs the k-th sample of each chain.
double coupled_w2(std::span<const double> a, std::span<const double> b,
                  std::size_t dim);

/// ||mean(samples) - reference||^2.
double mse(std::span<const double> samples, std::size_t dim,
           std::span<const double> reference);
double mse(const ChainOutput& chain, std::span<const double> reference);

/// Held-out log probability with the predictive averaged over posterior
/// samples: sum_j log( (1/S) sum_s P(y_j | beta_s, X_j) ). Always <= 0.
double heldout_log_prob(const LogisticRegressionModel& test,
                        std::span<const double> samples);
/// Plug-in variant: every test row evaluated at the single point `beta`.
double heldout_log_prob_plugin(const LogisticRegressionModel& test,
                               std::span<const double> beta);

}  // namespace vrlmc
