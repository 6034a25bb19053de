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

#include "vrlmc/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vrlmc/error.hpp"
#include "vrlmc/rng.hpp"

namespace vrlmc {

namespace {

// log(1 + e^t) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

// ---------------------------------------------------------------------------

void SumPotential::check_dim(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("dimension mismatch: expected " +
                                std::to_string(dim()) + ", got " +
                                std::to_string(x.size()));
  }
}

Vector SumPotential::grad_component(std::size_t i,
                                    std::span<const double> x) const {
  if (i >= num_components()) {
    throw std::out_of_range("component index " + std::to_string(i) +
                            " out of range [0, " +
                            std::to_string(num_components()) + ")");
  }
  check_dim(x);
  Vector g(dim(), 0.0);
  add_component_gradient(i, x, 1.0, g);
  return g;
}

Vector SumPotential::grad_prior(std::span<const double> x) const {
  check_dim(x);
  Vector g(dim(), 0.0);
  add_prior_gradient(x, 1.0, g);
  return g;
}

Vector SumPotential::grad_full(std::span<const double> x) const {
  check_dim(x);
  Vector g(dim(), 0.0);
  add_prior_gradient(x, 1.0, g);
  for (std::size_t i = 0; i < num_components(); ++i)
    add_component_gradient(i, x, 1.0, g);
  return g;
}

double SumPotential::value(std::span<const double> x) const {
  check_dim(x);
  double v = prior_value(x);
  for (std::size_t i = 0; i < num_components(); ++i)
    v += component_value(i, x);
  return v;
}

// ---------------------------------------------------------------------------

GaussianTarget::GaussianTarget(std::vector<double> data, std::size_t d,
                               double noise_scale)
    : data_(std::move(data)), d_(d), sigma0_(noise_scale) {
  if (d_ == 0 || data_.empty() || data_.size() % d_ != 0)
    throw ConfigError("gaussian target needs N >= 1 rows of dimension d >= 1");
  if (!(sigma0_ > 0.0)) throw ConfigError("noise scale must be positive");
  n_ = data_.size() / d_;
  inv_var_ = 1.0 / (sigma0_ * sigma0_);
  mean_.assign(d_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) axpy(1.0, datum(i), mean_);
  for (double& v : mean_) v /= static_cast<double>(n_);
}

double GaussianTarget::component_value(std::size_t i,
                                       std::span<const double> x) const {
  return 0.5 * inv_var_ * squared_distance(x, datum(i));
}

void GaussianTarget::add_component_gradient(std::size_t i,
                                            std::span<const double> x,
                                            double scale,
                                            std::span<double> out) const {
  const double* z = data_.data() + i * d_;
  const double c = scale * inv_var_;
  for (std::size_t j = 0; j < d_; ++j) out[j] += c * (x[j] - z[j]);
}

SmoothnessConstants GaussianTarget::constants() const {
  SmoothnessConstants c;
  c.M_tilde = inv_var_;
  c.M = static_cast<double>(n_) * inv_var_;
  c.m = c.M;
  c.L = 0.0;
  return c;
}

// ---------------------------------------------------------------------------

LogisticRegressionModel::LogisticRegressionModel(std::vector<double> design,
                                                 std::vector<double> labels,
                                                 std::size_t d,
                                                 double prior_variance)
    : design_(std::move(design)),
      labels_(std::move(labels)),
      d_(d),
      alpha_(prior_variance) {
  if (d_ == 0 || design_.empty() || design_.size() % d_ != 0)
    throw ConfigError("logistic model needs N >= 1 rows of dimension d >= 1");
  n_ = design_.size() / d_;
  if (labels_.size() != n_)
    throw ConfigError("logistic model: label count does not match rows");
  for (std::size_t i = 0; i < n_; ++i) {
    if (labels_[i] != 0.0 && labels_[i] != 1.0)
      throw ConfigError("logistic label at row " + std::to_string(i) +
                        " is not in {0,1}");
  }
  if (!(alpha_ > 0.0)) throw ConfigError("prior variance must be positive");
}

double LogisticRegressionModel::component_value(
    std::size_t i, std::span<const double> x) const {
  const double t = dot(row(i), x);
  return softplus(t) - labels_[i] * t;
}

void LogisticRegressionModel::add_component_gradient(
    std::size_t i, std::span<const double> x, double scale,
    std::span<double> out) const {
  const double* xi = design_.data() + i * d_;
  double t = 0.0;
  for (std::size_t j = 0; j < d_; ++j) t += xi[j] * x[j];
  const double c = scale * (sigmoid(t) - labels_[i]);
  for (std::size_t j = 0; j < d_; ++j) out[j] += c * xi[j];
}

double LogisticRegressionModel::prior_value(std::span<const double> x) const {
  return 0.5 * squared_norm(x) / alpha_;
}

void LogisticRegressionModel::add_prior_gradient(std::span<const double> x,
                                                 double scale,
                                                 std::span<double> out) const {
  axpy(scale / alpha_, x, out);
}

SmoothnessConstants LogisticRegressionModel::constants() const {
  // sigma'(t) <= 1/4 and |sigma''(t)| <= 1/(6 sqrt 3).
  const double hess_lip = 1.0 / (6.0 * std::sqrt(3.0));
  double sum_sq = 0.0;
  double max_sq = 0.0;
  double sum_cube = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double sq = squared_norm(row(i));
    sum_sq += sq;
    max_sq = std::max(max_sq, sq);
    sum_cube += sq * std::sqrt(sq);
  }
  SmoothnessConstants c;
  c.M = sum_sq / 4.0 + 1.0 / alpha_;
  c.M_tilde = max_sq / 4.0;
  c.m = 1.0 / alpha_;
  c.L = hess_lip * sum_cube;
  return c;
}

// ---------------------------------------------------------------------------

LogNormalModel::LogNormalModel(std::vector<double> data) {
  if (data.empty()) throw ConfigError("log-normal model needs N >= 1 values");
  log_data_.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!(data[i] > 0.0) || !std::isfinite(data[i]))
      throw ConfigError("log-normal datum at row " + std::to_string(i) +
                        " is not a positive finite number");
    log_data_.push_back(std::log(data[i]));
  }
}

double LogNormalModel::component_value(std::size_t i,
                                       std::span<const double> x) const {
  const double r = log_data_[i] - x[0];
  return log_data_[i] + x[1] + 0.5 * std::log(2.0 * std::numbers::pi) +
         0.5 * r * r * std::exp(-2.0 * x[1]);
}

void LogNormalModel::add_component_gradient(std::size_t i,
                                            std::span<const double> x,
                                            double scale,
                                            std::span<double> out) const {
  const double r = log_data_[i] - x[0];
  const double w = std::exp(-2.0 * x[1]);
  out[0] += scale * (-r * w);
  out[1] += scale * (1.0 - r * r * w);
}

SmoothnessConstants LogNormalModel::constants() const {
  throw ConstantsUnavailable(
      "log-normal model has unbounded curvature in (mu, log sigma); "
      "smoothness and strong convexity constants are unavailable");
}

// ---------------------------------------------------------------------------

ModelKind parse_model_kind(std::string_view name) {
  if (name == "gaussian") return ModelKind::kGaussian;
  if (name == "logistic") return ModelKind::kLogistic;
  if (name == "lognormal") return ModelKind::kLogNormal;
  throw ConfigError("unknown model kind '" + std::string(name) +
                    "' (expected gaussian|logistic|lognormal)");
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGaussian:
      return "gaussian";
    case ModelKind::kLogistic:
      return "logistic";
    case ModelKind::kLogNormal:
      return "lognormal";
  }
  return "unknown";
}

Dataset generate_synthetic(ModelKind kind, std::size_t n, std::size_t d,
                           std::uint64_t seed, const SyntheticParams& params) {
  if (n == 0) throw ConfigError("synthetic data needs N >= 1");
  if (d == 0 && kind != ModelKind::kLogNormal)
    throw ConfigError("synthetic data needs d >= 1");
  Rng rng(seed, 0, StreamRole::kData);
  Dataset out;
  out.kind = kind;
  out.rows = n;
  switch (kind) {
    case ModelKind::kGaussian: {
      out.cols = d;
      out.features.resize(n * d);
      for (double& z : out.features)
        z = params.data_mean + params.noise_scale * rng.normal();
      break;
    }
    case ModelKind::kLogistic: {
      out.cols = d;
      Vector beta = params.true_beta;
      if (beta.empty()) {
        beta.resize(d);
        rng.fill_normal(beta);
      } else if (beta.size() != d) {
        throw ConfigError("true_beta has the wrong dimension");
      }
      out.features.resize(n * d);
      out.labels.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        double t = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double xij = params.feature_scale * rng.normal();
          out.features[i * d + j] = xij;
          t += xij * beta[j];
        }
        out.labels[i] = rng.uniform() < sigmoid(t) ? 1.0 : 0.0;
      }
      break;
    }
    case ModelKind::kLogNormal: {
      if (!(params.lognormal_sigma > 0.0))
        throw ConfigError("log-normal sigma must be positive");
      out.cols = 1;
      out.features.resize(n);
      for (double& x : out.features)
        x = std::exp(params.lognormal_mu + params.lognormal_sigma * rng.normal());
      break;
    }
  }
  return out;
}

std::unique_ptr<SumPotential> make_potential(const Dataset& data,
                                             const ModelOptions& options) {
  switch (data.kind) {
    case ModelKind::kGaussian:
      return std::make_unique<GaussianTarget>(data.features, data.cols,
                                              options.noise_scale);
    case ModelKind::kLogistic:
      return std::make_unique<LogisticRegressionModel>(
          data.features, data.labels, data.cols, options.prior_variance);
    case ModelKind::kLogNormal:
      return std::make_unique<LogNormalModel>(data.features);
  }
  throw ConfigError("unknown model kind");
}

}  // namespace vrlmc
