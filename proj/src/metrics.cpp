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

#include "vrlmc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vrlmc/error.hpp"

namespace vrlmc {

namespace {

constexpr std::size_t kMaxGaussianDim = 64;

// log P(y | t) for y in {0, 1}: -log(1 + e^{-t}) or -log(1 + e^{t}).
double log_likelihood(double y, double t) {
  const double s = (y == 1.0) ? -t : t;
  return s > 0.0 ? -(s + std::log1p(std::exp(-s))) : -std::log1p(std::exp(s));
}

std::size_t row_count(std::span<const double> samples, std::size_t dim) {
  if (dim == 0 || samples.size() % dim != 0)
    throw std::invalid_argument("samples are not a whole number of rows");
  return samples.size() / dim;
}

}  // namespace

GaussianSummary isotropic_gaussian(Vector mean, double variance) {
  GaussianSummary s;
  const std::size_t d = mean.size();
  s.mean = std::move(mean);
  s.cov = SquareMatrix(d);
  for (std::size_t i = 0; i < d; ++i) s.cov(i, i) = variance;
  return s;
}

GaussianSummary summarize_samples(std::span<const double> samples,
                                  std::size_t dim) {
  const std::size_t count = row_count(samples, dim);
  if (count < 2) throw ConfigError("need at least two samples for moments");
  GaussianSummary s;
  s.mean.assign(dim, 0.0);
  for (std::size_t k = 0; k < count; ++k)
    axpy(1.0, samples.subspan(k * dim, dim), s.mean);
  for (double& m : s.mean) m /= static_cast<double>(count);
  s.cov = SquareMatrix(dim);
  for (std::size_t k = 0; k < count; ++k) {
    const double* row = samples.data() + k * dim;
    for (std::size_t i = 0; i < dim; ++i) {
      const double di = row[i] - s.mean[i];
      for (std::size_t j = i; j < dim; ++j)
        s.cov(i, j) += di * (row[j] - s.mean[j]);
    }
  }
  const double denom = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      s.cov(i, j) /= denom;
      s.cov(j, i) = s.cov(i, j);
    }
  }
  return s;
}

GaussianSummary summarize_samples(const ChainOutput& chain) {
  return summarize_samples(chain.samples, chain.dim);
}

double w2_gaussian(const GaussianSummary& a, const GaussianSummary& b) {
  const std::size_t d = a.dim();
  if (b.dim() != d || a.cov.size() != d || b.cov.size() != d)
    throw std::invalid_argument("w2_gaussian: dimension mismatch");
  if (d == 0 || d > kMaxGaussianDim)
    throw ConfigError("w2_gaussian supports 1 <= d <= 64");

  SquareMatrix sa = a.cov;
  SquareMatrix sb = b.cov;
  sa.symmetrize();
  sb.symmetrize();
  const SquareMatrix root_b = sqrt_psd(sb);
  SquareMatrix middle = root_b * sa * root_b;
  middle.symmetrize();
  const SquareMatrix cross = sqrt_psd(middle);

  const double mean_term = squared_distance(a.mean, b.mean);
  const double cov_term = sa.trace() + sb.trace() - 2.0 * cross.trace();
  return std::sqrt(mean_term + std::max(0.0, cov_term));
}

double w2_empirical_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ConfigError("w2_empirical_1d: empty input");
  if (a.size() != b.size())
    throw ConfigError("w2_empirical_1d: inputs must have equal length");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return std::sqrt(squared_distance(sa, sb) / static_cast<double>(sa.size()));
}

double coupled_w2(std::span<const double> a, std::span<const double> b,
                  std::size_t dim) {
  if (a.size() != b.size())
    throw ConfigError("coupled_w2: chains have different lengths");
  const std::size_t count = row_count(a, dim);
  if (count == 0) throw ConfigError("coupled_w2: empty input");
  return std::sqrt(squared_distance(a, b) / static_cast<double>(count));
}

double mse(std::span<const double> samples, std::size_t dim,
           std::span<const double> reference) {
  const std::size_t count = row_count(samples, dim);
  if (count == 0) throw ConfigError("mse: empty sample set");
  if (reference.size() != dim)
    throw std::invalid_argument("mse: reference dimension mismatch");
  Vector mean(dim, 0.0);
  for (std::size_t k = 0; k < count; ++k)
    axpy(1.0, samples.subspan(k * dim, dim), mean);
  for (double& m : mean) m /= static_cast<double>(count);
  return squared_distance(mean, reference);
}

double mse(const ChainOutput& chain, std::span<const double> reference) {
  return mse(chain.samples, chain.dim, reference);
}

double heldout_log_prob(const LogisticRegressionModel& test,
                        std::span<const double> samples) {
  const std::size_t d = test.dim();
  const std::size_t count = row_count(samples, d);
  if (count == 0) throw ConfigError("heldout_log_prob: no posterior samples");
  std::vector<double> logs(count);
  const double log_count = std::log(static_cast<double>(count));
  double total = 0.0;
  for (std::size_t j = 0; j < test.num_components(); ++j) {
    const auto row = test.row(j);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < count; ++s) {
      logs[s] = log_likelihood(test.label(j),
                               dot(row, samples.subspan(s * d, d)));
      peak = std::max(peak, logs[s]);
    }
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - peak);
    total += peak + std::log(acc) - log_count;
  }
  return total;
}

double heldout_log_prob_plugin(const LogisticRegressionModel& test,
                               std::span<const double> beta) {
  if (beta.size() != test.dim())
    throw std::invalid_argument("heldout_log_prob_plugin: dimension mismatch");
  double total = 0.0;
  for (std::size_t j = 0; j < test.num_components(); ++j)
    total += log_likelihood(test.label(j), dot(test.row(j), beta));
  return total;
}

}  // namespace vrlmc
