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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vrlmc/estimators.hpp"
#include "vrlmc/linalg.hpp"
#include "vrlmc/potentials.hpp"
#include "vrlmc/rng.hpp"

namespace vrlmc {

// ---------------------------------------------------------------------------
// Overdamped kernel

/// x - delta g + sqrt(2 delta) xi with the supplied standard normals xi.
Vector overdamped_step(std::span<const double> x, std::span<const double> g,
                       double delta, std::span<const double> xi);
Vector overdamped_step(std::span<const double> x, std::span<const double> g,
                       double delta, Rng& rng);

// ---------------------------------------------------------------------------
// Underdamped kernel
//
// One step integrates dv = -2 v dt - (1/M) g dt + sqrt(4/M) dB, dx = v dt
// with the gradient frozen at the start of the step, over a horizon
// t = delta * M. The result is Gaussian with the moments below.

/// Scalars shared by every coordinate of one underdamped step.
struct UldCoefficients {
  double t = 0.0;          ///< delta * M.
  double v_from_v = 0.0;   ///< e^{-2t}
  double v_from_g = 0.0;   ///< -(1 - e^{-2t}) / (2M)
  double x_from_v = 0.0;   ///< (1 - e^{-2t}) / 2
  double x_from_g = 0.0;   ///< -(t - (1 - e^{-2t})/2) / (2M)
  double s_xx = 0.0;
  double s_vv = 0.0;
  double s_xv = 0.0;
};

/// Cancellation-free evaluation: expm1 for the well-conditioned terms and a
/// power series for t < 0.5 in the two terms that vanish like t^2 and t^3.
UldCoefficients uld_coefficients(double delta, double smoothness);

/// Literal transcription of the closed forms. Loses relative accuracy as
/// t -> 0; kept as a reference for large t and for tests.
UldCoefficients uld_coefficients_closed_form(double delta, double smoothness);

/// Below this x-variance the 2x2 Cholesky factor is treated as degenerate:
/// the position is set to its mean and only the velocity is randomised.
inline constexpr double kUldDegenerateVariance = 1e-300;

struct UldStepMoments {
  Vector mean_x;
  Vector mean_v;
  double s_xx = 0.0;
  double s_vv = 0.0;
  double s_xv = 0.0;
};

UldStepMoments uld_moments(std::span<const double> x, std::span<const double> v,
                           std::span<const double> g, double delta,
                           double smoothness);

struct PhasePoint {
  Vector x;
  Vector v;
};

/// Samples (x', v') coordinatewise; `z` holds 2d standard normals ordered
/// (z1_0, z2_0, z1_1, z2_1, ...).
PhasePoint uld_step(std::span<const double> x, std::span<const double> v,
                    std::span<const double> g, const UldCoefficients& coeffs,
                    std::span<const double> z);
PhasePoint uld_step(std::span<const double> x, std::span<const double> v,
                    std::span<const double> g, double delta, double smoothness,
                    Rng& rng);

// ---------------------------------------------------------------------------
// Chain driver

enum class Method {
  kLD,
  kULD,
  kSGLD,
  kSGULD,
  kSagaLD,
  kSvrgLD1,
  kSvrgLD2,
  kCvLD,
  kCvULD,
};

Method parse_method(std::string_view name);
std::string_view to_string(Method method);
bool is_underdamped(Method method);
bool uses_batches(Method method);
bool needs_center(Method method);
bool is_svrg(Method method);

struct ChainProgress {
  std::size_t iteration = 0;  ///< Iterations completed.
  std::uint64_t gradient_queries = 0;
  std::span<const double> x;
  std::span<const double> v;  ///< Empty for overdamped methods.
};

struct ChainConfig {
  double delta = 1e-3;
  std::size_t batch_size = 10;
  std::size_t tau = 0;  ///< SVRG epoch length; required for SVRG methods.
  std::size_t iters = 1000;
  std::optional<std::size_t> burn_in;  ///< Default: 10% of iters.
  std::size_t thin = 1;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  std::optional<Vector> init;    ///< Overdamped start; default zero vector.
  std::optional<Vector> center;  ///< Mode x* for CV methods.
  /// Geometric schedule delta_k = max(delta * decay^k, min_delta).
  double step_decay = 1.0;
  double min_delta = 0.0;
  bool keep_velocity = false;
  /// Called after every `observe_every`-th iteration when both are set.
  std::function<void(const ChainProgress&)> observer;
  std::size_t observe_every = 0;
};

struct ChainDiagnostics {
  Vector sample_mean;                 ///< Mean of the kept samples.
  double mean_kinetic = 0.0;          ///< Average ||v||^2 over all iterations.
  double max_running_kinetic = 0.0;   ///< Max over k of the running average.
  double mean_center_dist = 0.0;      ///< Average ||x - x*||^2 (CV methods).
  double max_running_center_dist = 0.0;
};

struct ChainOutput {
  Method method = Method::kLD;
  std::size_t dim = 0;
  std::vector<double> samples;  ///< kept x (row-major, kept x dim).
  std::vector<double> velocities;  ///< kept v when requested.
  std::vector<std::size_t> sample_iters;
  std::uint64_t gradient_queries = 0;
  double wall_seconds = 0.0;
  ChainDiagnostics diagnostics;

  std::size_t num_samples() const { return sample_iters.size(); }
  std::span<const double> sample(std::size_t k) const {
    return {samples.data() + k * dim, dim};
  }
  std::span<const double> velocity(std::size_t k) const {
    return {velocities.data() + k * dim, dim};
  }
};

/// Runs `method` against `potential`. Deterministic in (config, seed,
/// replica); wall_seconds is the only field that varies between runs.
ChainOutput run_chain(Method method, const SumPotential& potential,
                      const ChainConfig& config);

/// Component-gradient queries per iteration after initialisation, as a
/// multiple of the batch size (or N for full-gradient methods).
std::uint64_t queries_per_iteration(Method method, std::size_t num_components,
                                    std::size_t batch_size);

}  // namespace vrlmc
