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
#include <optional>
#include <string>
#include <vector>

#include "vrlmc/estimators.hpp"
#include "vrlmc/linalg.hpp"
#include "vrlmc/potentials.hpp"

namespace vrlmc {

/// Mode search with SAGA variance-reduced stochastic gradient descent.
struct MinimizeOptions {
  std::optional<double> step;        ///< Default 1/(2M), or 1e-3 without M.
  std::size_t batch_size = 10;
  std::size_t max_iters = 1'000'000;
  std::optional<double> tolerance;   ///< Default 1e-6 (1 + ||grad f(x0)||).
  std::optional<std::size_t> check_every;  ///< Default ceil(N / n).
  std::uint64_t seed = 0;
  std::optional<Vector> init;        ///< Default zero vector.
};

struct ModeResult {
  Vector x_star;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::uint64_t gradient_queries = 0;
  double tolerance = 0.0;
  std::string diagnostic;  ///< Set when the search diverged or ran out.
  /// f(x) at each convergence check, starting with f(x0).
  std::vector<double> checkpoint_values;
};

ModeResult saga_sgd_minimize(const SumPotential& potential,
                             const MinimizeOptions& options = {});

/// Plain gradient descent on the full gradient; reference trajectory for
/// the SAGA descent.
std::vector<Vector> gradient_descent_path(const SumPotential& potential,
                                          Vector x0, double step,
                                          std::size_t iterations);

}  // namespace vrlmc
