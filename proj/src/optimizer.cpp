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

#include "vrlmc/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vrlmc/error.hpp"
#include "vrlmc/rng.hpp"

namespace vrlmc {

namespace {

constexpr double kDivergenceRadius = 1e12;

double default_step(const SumPotential& potential) {
  try {
    return 1.0 / (2.0 * potential.constants().M);
  } catch (const ConstantsUnavailable&) {
    return 1e-3;
  }
}

}  // namespace

ModeResult saga_sgd_minimize(const SumPotential& potential,
                             const MinimizeOptions& options) {
  const std::size_t d = potential.dim();
  const std::size_t num = potential.num_components();
  const double step = options.step.value_or(default_step(potential));
  if (!(step > 0.0)) throw ConfigError("optimizer step must be positive");
  if (options.batch_size == 0) throw ConfigError("batch size must be >= 1");
  const std::size_t check_every = options.check_every.value_or(
      (num + options.batch_size - 1) / options.batch_size);
  if (check_every == 0) throw ConfigError("check_every must be >= 1");

  ModeResult result;
  Vector x = options.init.value_or(Vector(d, 0.0));
  if (x.size() != d) throw std::invalid_argument("initial point dimension");

  Vector grad = potential.grad_full(x);
  result.gradient_queries += num;
  double gnorm = norm(grad);
  result.tolerance = options.tolerance.value_or(1e-6 * (1.0 + gnorm));
  result.checkpoint_values.push_back(potential.value(x));

  auto finish = [&](bool converged, std::string diagnostic) {
    result.x_star = x;
    result.grad_norm = gnorm;
    result.converged = converged;
    result.diagnostic = std::move(diagnostic);
    return result;
  };

  if (gnorm <= result.tolerance) return finish(true, "");

  Rng rng(options.seed, 0, StreamRole::kOptimizer);
  SagaState saga;
  saga.initialize(potential, x);
  result.gradient_queries += num;
  MiniBatch batch;
  Vector g(d);

  for (std::size_t k = 1; k <= options.max_iters; ++k) {
    draw_batch(num, options.batch_size, rng, batch);
    saga.estimate_and_update(potential, x, batch, g);
    result.gradient_queries += batch.size();
    axpy(-step, g, x);
    result.iterations = k;

    if (!all_finite(x) || norm(x) > kDivergenceRadius) {
      gnorm = std::numeric_limits<double>::infinity();
      return finish(false, "diverged after " + std::to_string(k) +
                               " iterations (step " + std::to_string(step) +
                               "); reduce the step size");
    }
    if (k % check_every == 0) {
      grad = potential.grad_full(x);
      result.gradient_queries += num;
      gnorm = norm(grad);
      result.checkpoint_values.push_back(potential.value(x));
      if (gnorm <= result.tolerance) return finish(true, "");
    }
  }
  grad = potential.grad_full(x);
  result.gradient_queries += num;
  gnorm = norm(grad);
  if (gnorm <= result.tolerance) return finish(true, "");
  return finish(false, "iteration budget exhausted with gradient norm " +
                           std::to_string(gnorm));
}

std::vector<Vector> gradient_descent_path(const SumPotential& potential,
                                          Vector x0, double step,
                                          std::size_t iterations) {
  std::vector<Vector> path;
  path.reserve(iterations + 1);
  path.push_back(x0);
  for (std::size_t k = 0; k < iterations; ++k) {
    const Vector g = potential.grad_full(path.back());
    Vector next = path.back();
    axpy(-step, g, next);
    path.push_back(std::move(next));
  }
  return path;
}

}  // namespace vrlmc
