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

#include "vrlmc/samplers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vrlmc/error.hpp"

namespace vrlmc {

namespace {

void require_positive_step(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw ConfigError("step size must be a positive finite number");
}

void require_same_size(std::span<const double> a, std::span<const double> b,
                       const char* what) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string("dimension mismatch: ") + what);
}

// t - (1 - e^{-2t})/2 = sum_{k>=2} (-1)^{k+1} 2^{k-1} t^k / k!
double drift_gap_series(double t) {
  double term = 2.0 * t * t / 2.0;  // k = 2: 2^1 t^2 / 2!
  double sum = term;
  for (int k = 3; k < 60; ++k) {
    term *= -2.0 * t / k;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// t - e^{-4t}/4 - 3/4 + e^{-2t} = sum_{k>=3} (-1)^k (2^k - 4^{k-1}) t^k / k!
double position_variance_series(double t) {
  double pow2 = 8.0;       // 2^k
  double pow4 = 16.0;      // 4^{k-1}
  double tk_over_fact = t * t * t / 6.0;
  double sum = 0.0;
  for (int k = 3; k < 80; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double term = sign * (pow2 - pow4) * tk_over_fact;
    sum += term;
    if (k > 4 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
    pow2 *= 2.0;
    pow4 *= 4.0;
    tk_over_fact *= t / (k + 1);
  }
  return sum;
}

void check_uld_inputs(double delta, double smoothness) {
  require_positive_step(delta);
  if (!(smoothness > 0.0) || !std::isfinite(smoothness))
    throw ConfigError("smoothness M must be a positive finite number");
}

}  // namespace

// ---------------------------------------------------------------------------

Vector overdamped_step(std::span<const double> x, std::span<const double> g,
                       double delta, std::span<const double> xi) {
  require_positive_step(delta);
  require_same_size(x, g, "position vs gradient");
  require_same_size(x, xi, "position vs noise");
  if (!all_finite(x) || !all_finite(g))
    throw NumericalError("overdamped step received non-finite input");
  const double noise = std::sqrt(2.0 * delta);
  Vector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = x[j] - delta * g[j] + noise * xi[j];
  return out;
}

Vector overdamped_step(std::span<const double> x, std::span<const double> g,
                       double delta, Rng& rng) {
  Vector xi(x.size());
  rng.fill_normal(xi);
  return overdamped_step(x, g, delta, xi);
}

// ---------------------------------------------------------------------------

UldCoefficients uld_coefficients(double delta, double smoothness) {
  check_uld_inputs(delta, smoothness);
  const double t = delta * smoothness;
  const double inv = 1.0 / smoothness;
  const double one_minus_e2 = -std::expm1(-2.0 * t);
  const double one_minus_e4 = -std::expm1(-4.0 * t);

  double gap;
  double sxx_scaled;
  if (t < 0.5) {
    gap = drift_gap_series(t);
    sxx_scaled = position_variance_series(t);
  } else {
    const double e2 = std::exp(-2.0 * t);
    const double e4 = std::exp(-4.0 * t);
    gap = t - 0.5 * one_minus_e2;
    sxx_scaled = t - 0.25 * e4 - 0.75 + e2;
  }

  UldCoefficients c;
  c.t = t;
  c.v_from_v = 1.0 - one_minus_e2;
  c.v_from_g = -0.5 * inv * one_minus_e2;
  c.x_from_v = 0.5 * one_minus_e2;
  c.x_from_g = -0.5 * inv * gap;
  c.s_xx = inv * sxx_scaled;
  c.s_vv = inv * one_minus_e4;
  // 1 + e^{-4t} - 2 e^{-2t} = (1 - e^{-2t})^2
  c.s_xv = 0.5 * inv * one_minus_e2 * one_minus_e2;
  return c;
}

UldCoefficients uld_coefficients_closed_form(double delta, double smoothness) {
  check_uld_inputs(delta, smoothness);
  const double t = delta * smoothness;
  const double inv = 1.0 / smoothness;
  const double e2 = std::exp(-2.0 * t);
  const double e4 = std::exp(-4.0 * t);
  UldCoefficients c;
  c.t = t;
  c.v_from_v = e2;
  c.v_from_g = -0.5 * inv * (1.0 - e2);
  c.x_from_v = 0.5 * (1.0 - e2);
  c.x_from_g = -0.5 * inv * (t - 0.5 * (1.0 - e2));
  c.s_xx = inv * (t - 0.25 * e4 - 0.75 + e2);
  c.s_vv = inv * (1.0 - e4);
  c.s_xv = 0.5 * inv * (1.0 + e4 - 2.0 * e2);
  return c;
}

UldStepMoments uld_moments(std::span<const double> x, std::span<const double> v,
                           std::span<const double> g, double delta,
                           double smoothness) {
  require_same_size(x, v, "position vs velocity");
  require_same_size(x, g, "position vs gradient");
  const UldCoefficients c = uld_coefficients(delta, smoothness);
  UldStepMoments m;
  m.mean_x.resize(x.size());
  m.mean_v.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    m.mean_v[j] = c.v_from_v * v[j] + c.v_from_g * g[j];
    m.mean_x[j] = x[j] + c.x_from_v * v[j] + c.x_from_g * g[j];
  }
  m.s_xx = c.s_xx;
  m.s_vv = c.s_vv;
  m.s_xv = c.s_xv;
  return m;
}

namespace {

struct CholeskyFactor {
  double l11 = 0.0;
  double l21 = 0.0;
  double l22 = 0.0;
};

CholeskyFactor factor(const UldCoefficients& c) {
  CholeskyFactor f;
  if (c.s_xx < kUldDegenerateVariance) {
    f.l22 = std::sqrt(std::max(0.0, c.s_vv));
    return f;
  }
  f.l11 = std::sqrt(c.s_xx);
  f.l21 = c.s_xv / f.l11;
  f.l22 = std::sqrt(std::max(0.0, c.s_vv - f.l21 * f.l21));
  return f;
}

void uld_step_inplace(std::span<double> x, std::span<double> v,
                      std::span<const double> g, const UldCoefficients& c,
                      const CholeskyFactor& f, Rng& rng) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    const double mv = c.v_from_v * v[j] + c.v_from_g * g[j];
    const double mx = x[j] + c.x_from_v * v[j] + c.x_from_g * g[j];
    x[j] = mx + f.l11 * z1;
    v[j] = mv + f.l21 * z1 + f.l22 * z2;
  }
}

}  // namespace

PhasePoint uld_step(std::span<const double> x, std::span<const double> v,
                    std::span<const double> g, const UldCoefficients& c,
                    std::span<const double> z) {
  require_same_size(x, v, "position vs velocity");
  require_same_size(x, g, "position vs gradient");
  if (z.size() != 2 * x.size())
    throw std::invalid_argument("underdamped step needs 2d normals");
  const CholeskyFactor f = factor(c);
  PhasePoint out{Vector(x.size()), Vector(x.size())};
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double z1 = z[2 * j];
    const double z2 = z[2 * j + 1];
    const double mv = c.v_from_v * v[j] + c.v_from_g * g[j];
    const double mx = x[j] + c.x_from_v * v[j] + c.x_from_g * g[j];
    out.x[j] = mx + f.l11 * z1;
    out.v[j] = mv + f.l21 * z1 + f.l22 * z2;
  }
  return out;
}

PhasePoint uld_step(std::span<const double> x, std::span<const double> v,
                    std::span<const double> g, double delta, double smoothness,
                    Rng& rng) {
  const UldCoefficients c = uld_coefficients(delta, smoothness);
  Vector z(2 * x.size());
  rng.fill_normal(z);
  return uld_step(x, v, g, c, z);
}

// ---------------------------------------------------------------------------

Method parse_method(std::string_view name) {
  if (name == "LD") return Method::kLD;
  if (name == "ULD") return Method::kULD;
  if (name == "SGLD") return Method::kSGLD;
  if (name == "SGULD") return Method::kSGULD;
  if (name == "SAGA-LD") return Method::kSagaLD;
  if (name == "SVRG-LD-I") return Method::kSvrgLD1;
  if (name == "SVRG-LD-II") return Method::kSvrgLD2;
  if (name == "CV-LD") return Method::kCvLD;
  if (name == "CV-ULD") return Method::kCvULD;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kLD: return "LD";
    case Method::kULD: return "ULD";
    case Method::kSGLD: return "SGLD";
    case Method::kSGULD: return "SGULD";
    case Method::kSagaLD: return "SAGA-LD";
    case Method::kSvrgLD1: return "SVRG-LD-I";
    case Method::kSvrgLD2: return "SVRG-LD-II";
    case Method::kCvLD: return "CV-LD";
    case Method::kCvULD: return "CV-ULD";
  }
  return "unknown";
}

bool is_underdamped(Method method) {
  return method == Method::kULD || method == Method::kSGULD ||
         method == Method::kCvULD;
}

bool uses_batches(Method method) {
  return method != Method::kLD && method != Method::kULD;
}

bool needs_center(Method method) {
  return method == Method::kCvLD || method == Method::kCvULD;
}

bool is_svrg(Method method) {
  return method == Method::kSvrgLD1 || method == Method::kSvrgLD2;
}

std::uint64_t queries_per_iteration(Method method, std::size_t num_components,
                                    std::size_t batch_size) {
  switch (method) {
    case Method::kLD:
    case Method::kULD:
      return num_components;
    case Method::kSGLD:
    case Method::kSGULD:
    case Method::kSagaLD:
      return batch_size;
    case Method::kSvrgLD1:
    case Method::kSvrgLD2:
    case Method::kCvLD:
    case Method::kCvULD:
      return 2 * batch_size;
  }
  return 0;
}

namespace {

void full_gradient_into(const SumPotential& potential, std::span<const double> x,
                        std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  potential.add_prior_gradient(x, 1.0, out);
  for (std::size_t i = 0; i < potential.num_components(); ++i)
    potential.add_component_gradient(i, x, 1.0, out);
}

void validate(Method method, const SumPotential& potential,
              const ChainConfig& config) {
  require_positive_step(config.delta);
  if (config.iters == 0) throw ConfigError("iters must be at least 1");
  if (config.thin == 0) throw ConfigError("thin must be at least 1");
  if (uses_batches(method) && config.batch_size == 0)
    throw ConfigError("batch size must be at least 1");
  if (is_svrg(method) && config.tau == 0)
    throw ConfigError(std::string(to_string(method)) +
                      " requires an epoch length tau >= 1");
  if (needs_center(method) && !config.center)
    throw ConfigError(std::string(to_string(method)) +
                      " requires a mode (centre) for its control variate");
  if (config.center && config.center->size() != potential.dim())
    throw std::invalid_argument("centre has the wrong dimension");
  if (config.init && config.init->size() != potential.dim())
    throw std::invalid_argument("initial point has the wrong dimension");
  if (!(config.step_decay > 0.0) || config.step_decay > 1.0)
    throw ConfigError("step decay must lie in (0, 1]");
}

}  // namespace

ChainOutput run_chain(Method method, const SumPotential& potential,
                      const ChainConfig& config) {
  validate(method, potential, config);
  const auto wall_start = std::chrono::steady_clock::now();

  const std::size_t d = potential.dim();
  const std::size_t num = potential.num_components();
  const bool underdamped = is_underdamped(method);
  double smoothness = 0.0;
  if (underdamped) smoothness = potential.constants().M;

  Rng noise_rng(config.seed, config.replica, StreamRole::kNoise);
  Rng batch_rng(config.seed, config.replica, StreamRole::kBatch);
  Rng epoch_rng(config.seed, config.replica, StreamRole::kEpoch);

  Vector x(d, 0.0);
  Vector v(d, 0.0);
  if (needs_center(method)) {
    x = *config.center;
  } else if (config.init) {
    x = *config.init;
  }

  ChainOutput out;
  out.method = method;
  out.dim = d;

  std::uint64_t queries = 0;
  SagaState saga;
  std::optional<SvrgState> svrg;
  CvState cv;
  if (method == Method::kSagaLD) {
    saga.initialize(potential, x);
    queries += num;
  } else if (is_svrg(method)) {
    svrg.emplace(config.tau, method == Method::kSvrgLD1 ? SvrgOption::kI
                                                         : SvrgOption::kII);
  } else if (needs_center(method)) {
    cv = CvState(potential, *config.center);
    queries += num;
  }

  const std::size_t burn_in =
      config.burn_in.value_or(config.iters / 10);
  const std::uint64_t per_step =
      queries_per_iteration(method, num, config.batch_size);

  MiniBatch batch;
  Vector g(d);
  Vector xi(d);
  double delta = config.delta;
  UldCoefficients coeffs;
  CholeskyFactor chol;
  double coeff_delta = -1.0;

  double kinetic_sum = 0.0;
  double center_sum = 0.0;
  ChainDiagnostics& diag = out.diagnostics;
  diag.sample_mean.assign(d, 0.0);

  for (std::size_t k = 0; k < config.iters; ++k) {
    if (svrg && k % config.tau == 0) {
      x = svrg->refresh(potential, k, x, epoch_rng);
      queries += num;
    }

    switch (method) {
      case Method::kLD:
      case Method::kULD:
        full_gradient_into(potential, x, g);
        break;
      case Method::kSGLD:
      case Method::kSGULD:
        draw_batch(num, config.batch_size, batch_rng, batch);
        sgld_estimate(potential, x, batch, g);
        break;
      case Method::kSagaLD:
        draw_batch(num, config.batch_size, batch_rng, batch);
        saga.estimate_and_update(potential, x, batch, g);
        break;
      case Method::kSvrgLD1:
      case Method::kSvrgLD2:
        draw_batch(num, config.batch_size, batch_rng, batch);
        svrg->estimate(potential, x, batch, g);
        break;
      case Method::kCvLD:
      case Method::kCvULD:
        draw_batch(num, config.batch_size, batch_rng, batch);
        cv.estimate(potential, x, batch, g);
        break;
    }
    queries += per_step;

    if (underdamped) {
      if (delta != coeff_delta) {
        coeffs = uld_coefficients(delta, smoothness);
        chol = factor(coeffs);
        coeff_delta = delta;
      }
      uld_step_inplace(x, v, g, coeffs, chol, noise_rng);
    } else {
      noise_rng.fill_normal(xi);
      const double noise = std::sqrt(2.0 * delta);
      for (std::size_t j = 0; j < d; ++j) x[j] += -delta * g[j] + noise * xi[j];
    }
    if (!all_finite(x) || (underdamped && !all_finite(v))) {
      throw NumericalError(std::string(to_string(method)) +
                           " diverged at iteration " + std::to_string(k + 1) +
                           " (delta=" + std::to_string(delta) + ")");
    }
    if (svrg) svrg->record(x);

    const std::size_t iter = k + 1;
    const double running_count = static_cast<double>(iter);
    if (underdamped) {
      kinetic_sum += squared_norm(v);
      diag.max_running_kinetic =
          std::max(diag.max_running_kinetic, kinetic_sum / running_count);
    }
    if (config.center) {
      center_sum += squared_distance(x, *config.center);
      diag.max_running_center_dist =
          std::max(diag.max_running_center_dist, center_sum / running_count);
    }

    if (iter > burn_in && (iter - burn_in) % config.thin == 0) {
      out.samples.insert(out.samples.end(), x.begin(), x.end());
      if (config.keep_velocity && underdamped)
        out.velocities.insert(out.velocities.end(), v.begin(), v.end());
      out.sample_iters.push_back(iter);
      axpy(1.0, x, diag.sample_mean);
    }

    if (config.observer && config.observe_every > 0 &&
        iter % config.observe_every == 0) {
      ChainProgress progress;
      progress.iteration = iter;
      progress.gradient_queries = queries;
      progress.x = x;
      if (underdamped) progress.v = v;
      config.observer(progress);
    }

    if (config.step_decay < 1.0)
      delta = std::max(delta * config.step_decay, config.min_delta);
  }

  const double iters = static_cast<double>(config.iters);
  diag.mean_kinetic = kinetic_sum / iters;
  diag.mean_center_dist = center_sum / iters;
  if (out.num_samples() > 0) {
    for (double& m : diag.sample_mean)
      m /= static_cast<double>(out.num_samples());
  }
  out.gradient_queries = queries;
  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - wall_start)
                         .count();
  return out;
}

}  // namespace vrlmc
