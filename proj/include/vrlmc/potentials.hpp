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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vrlmc/linalg.hpp"

namespace vrlmc {

/// Gradient-Lipschitz, strong-convexity and Hessian-Lipschitz constants of
/// the summed potential f = f_0 + sum_i f_i.
struct SmoothnessConstants {
  double M = 0.0;        ///< Lipschitz constant of grad f.
  double M_tilde = 0.0;  ///< Lipschitz constant of each grad f_i.
  double m = 0.0;        ///< Strong convexity of f.
  std::optional<double> L;  ///< Hessian Lipschitz constant, if known.

  double kappa() const { return M / m; }
};

/**
 * A negative log-posterior f(x) = f_0(x) + sum_{i<N} f_i(x) with one term
 * per datum and an optional prior term f_0.
 *
 * Component indices are zero-based: valid indices are [0, N).
 *
 * The `add_*` virtuals are the unchecked hot-path oracles used by the
 * estimators; `grad_component`, `grad_full` and `value` validate their
 * arguments. Implementations are immutable after construction and safe to
 * share between threads.
 */
class SumPotential {
 public:
  virtual ~SumPotential() = default;

  virtual std::size_t num_components() const = 0;
  virtual std::size_t dim() const = 0;
  virtual bool has_prior() const { return false; }
  virtual std::string_view name() const = 0;

  virtual double component_value(std::size_t i,
                                 std::span<const double> x) const = 0;
  /// out += scale * grad f_i(x)
  virtual void add_component_gradient(std::size_t i, std::span<const double> x,
                                      double scale,
                                      std::span<double> out) const = 0;
  virtual double prior_value(std::span<const double> /*x*/) const {
    return 0.0;
  }
  /// out += scale * grad f_0(x)
  virtual void add_prior_gradient(std::span<const double> /*x*/,
                                  double /*scale*/,
                                  std::span<double> /*out*/) const {}

  /// Throws ConstantsUnavailable when the model violates the assumptions.
  virtual SmoothnessConstants constants() const = 0;

  Vector grad_component(std::size_t i, std::span<const double> x) const;
  Vector grad_prior(std::span<const double> x) const;
  Vector grad_full(std::span<const double> x) const;
  double value(std::span<const double> x) const;

 protected:
  void check_dim(std::span<const double> x) const;
};

/// f_i(x) = ||x - z_i||^2 / (2 sigma0^2), no prior. The posterior is exactly
/// N(mean(z), sigma0^2 / N * I).
class GaussianTarget final : public SumPotential {
 public:
  /// `data` is row-major N x d.
  GaussianTarget(std::vector<double> data, std::size_t d, double noise_scale);

  std::size_t num_components() const override { return n_; }
  std::size_t dim() const override { return d_; }
  std::string_view name() const override { return "gaussian"; }

  double component_value(std::size_t i,
                         std::span<const double> x) const override;
  void add_component_gradient(std::size_t i, std::span<const double> x,
                              double scale,
                              std::span<double> out) const override;
  SmoothnessConstants constants() const override;

  double noise_scale() const { return sigma0_; }
  std::span<const double> datum(std::size_t i) const {
    return {data_.data() + i * d_, d_};
  }
  const Vector& posterior_mean() const { return mean_; }
  double posterior_variance() const { return sigma0_ * sigma0_ / n_; }

 private:
  std::vector<double> data_;
  std::size_t n_;
  std::size_t d_;
  double sigma0_;
  double inv_var_;
  Vector mean_;
};

/// Bayesian logistic regression with labels in {0,1} and prior N(0, alpha I):
/// f_i(b) = log(1 + exp(b.X_i)) - y_i b.X_i,  f_0(b) = ||b||^2 / (2 alpha).
class LogisticRegressionModel final : public SumPotential {
 public:
  LogisticRegressionModel(std::vector<double> design, std::vector<double> labels,
                          std::size_t d, double prior_variance = 1.0);

  std::size_t num_components() const override { return n_; }
  std::size_t dim() const override { return d_; }
  bool has_prior() const override { return true; }
  std::string_view name() const override { return "logistic"; }

  double component_value(std::size_t i,
                         std::span<const double> x) const override;
  void add_component_gradient(std::size_t i, std::span<const double> x,
                              double scale,
                              std::span<double> out) const override;
  double prior_value(std::span<const double> x) const override;
  void add_prior_gradient(std::span<const double> x, double scale,
                          std::span<double> out) const override;
  SmoothnessConstants constants() const override;

  std::span<const double> row(std::size_t i) const {
    return {design_.data() + i * d_, d_};
  }
  double label(std::size_t i) const { return labels_[i]; }
  double prior_variance() const { return alpha_; }

 private:
  std::vector<double> design_;
  std::vector<double> labels_;
  std::size_t n_;
  std::size_t d_;
  double alpha_;
};

/// Log-normal likelihood over theta = (mu, s), sigma = exp(s), flat prior:
/// f_i = ln x_i + s + ln(2 pi)/2 + (ln x_i - mu)^2 e^{-2s} / 2.
/// Not strongly convex with bounded curvature, so constants() throws.
class LogNormalModel final : public SumPotential {
 public:
  explicit LogNormalModel(std::vector<double> data);

  std::size_t num_components() const override { return log_data_.size(); }
  std::size_t dim() const override { return 2; }
  std::string_view name() const override { return "lognormal"; }

  double component_value(std::size_t i,
                         std::span<const double> x) const override;
  void add_component_gradient(std::size_t i, std::span<const double> x,
                              double scale,
                              std::span<double> out) const override;
  SmoothnessConstants constants() const override;

 private:
  std::vector<double> log_data_;
};

// ---------------------------------------------------------------------------
// Datasets

enum class ModelKind { kGaussian, kLogistic, kLogNormal };

ModelKind parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind kind);

/// Row-major feature matrix plus labels (logistic only). Log-normal data
/// has a single feature column.
struct Dataset {
  ModelKind kind = ModelKind::kGaussian;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> features;
  std::vector<double> labels;

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * cols, cols};
  }
};

struct SyntheticParams {
  double noise_scale = 1.0;       ///< Gaussian: sigma0.
  double data_mean = 0.0;         ///< Gaussian: centre of the z_i cloud.
  double feature_scale = 1.0;     ///< Logistic: X_ij ~ N(0, scale^2).
  std::vector<double> true_beta;  ///< Logistic: drawn N(0, 1) when empty.
  double lognormal_mu = 0.0;
  double lognormal_sigma = 1.0;
};

/// Deterministic given the seed. For log-normal data `d` is ignored.
Dataset generate_synthetic(ModelKind kind, std::size_t n, std::size_t d,
                           std::uint64_t seed,
                           const SyntheticParams& params = {});

struct ModelOptions {
  double prior_variance = 1.0;  ///< Logistic alpha.
  double noise_scale = 1.0;     ///< Gaussian sigma0.
};

std::unique_ptr<SumPotential> make_potential(const Dataset& data,
                                             const ModelOptions& options = {});

}  // namespace vrlmc
