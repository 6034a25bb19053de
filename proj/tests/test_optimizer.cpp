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

#include <cmath>

#include "doctest.h"
#include "vrlmc/error.hpp"
#include "vrlmc/optimizer.hpp"
#include "vrlmc/potentials.hpp"

using namespace vrlmc;

namespace {

Vector saga_after(const SumPotential& p, const Vector& x0, double step,
                  std::size_t n, std::size_t iters) {
  MinimizeOptions o;
  o.step = step;
  o.batch_size = n;
  o.max_iters = iters;
  o.tolerance = 0.0;
  o.init = x0;
  o.seed = 3;
  return saga_sgd_minimize(p, o).x_star;
}

}  // namespace

TEST_CASE("two-point gaussian mode") {
  GaussianTarget t({1, 3}, 1, 1.0);
  MinimizeOptions o;
  o.tolerance = 1e-8;
  const ModeResult r = saga_sgd_minimize(t, o);
  CHECK(r.converged);
  CHECK(r.grad_norm <= 1e-8);
  CHECK(std::abs(r.x_star[0] - 2.0) <= 1e-8);
  CHECK(r.diagnostic.empty());
}

TEST_CASE("already at the mode") {
  GaussianTarget t({1, 3, 5, 7}, 2, 1.0);
  MinimizeOptions o;
  o.init = t.posterior_mean();
  o.tolerance = 1e-10;
  const ModeResult r = saga_sgd_minimize(t, o);
  CHECK(r.converged);
  CHECK(r.iterations <= 1);
  CHECK(r.grad_norm < 1e-12);
}

TEST_CASE("too large a step diverges with a diagnostic") {
  GaussianTarget t({1, 3}, 1, 1.0);  // M = 2
  MinimizeOptions o;
  o.step = 1.5;
  o.batch_size = 2;
  const ModeResult r = saga_sgd_minimize(t, o);
  CHECK_FALSE(r.converged);
  CHECK(r.diagnostic.find("diverged") != std::string::npos);
  o.step = -1.0;
  CHECK_THROWS_AS(saga_sgd_minimize(t, o), ConfigError);
}

TEST_CASE("first step with a fresh table is a gradient-descent step") {
  const Dataset data = generate_synthetic(ModelKind::kLogistic, 80, 3, 7);
  const auto pot = make_potential(data);
  const Vector x0{0.4, -0.3, 0.8};
  const double step = 1e-3;
  const Vector saga = saga_after(*pot, x0, step, 5, 1);
  const Vector gd = gradient_descent_path(*pot, x0, step, 1).back();
  for (std::size_t j = 0; j < 3; ++j) CHECK(saga[j] == doctest::Approx(gd[j]).epsilon(1e-13));
}

TEST_CASE("single-component quadratic reproduces gradient descent") {
  GaussianTarget t({1.0, -2.0, 0.5}, 3, 1.3);  // one component in 3-D
  const Vector x0{4, 4, 4};
  const double step = 0.3;
  const auto path = gradient_descent_path(t, x0, step, 25);
  for (std::size_t k : {1u, 2u, 7u, 25u}) {
    const Vector saga = saga_after(t, x0, step, 3, k);
    CHECK(std::sqrt(squared_distance(saga, path[k])) <= 1e-12 * (1 + norm(path[k])));
  }
}

TEST_CASE("checkpoint values decrease on strongly convex problems") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Dataset data = generate_synthetic(ModelKind::kLogistic, 300, 4, seed);
    const auto pot = make_potential(data);
    MinimizeOptions o;
    o.seed = seed;
    // Classical SAGA step 1/(3 N M_tilde). The larger default step converges
    // faster but can wander up by ~1e-5 between checkpoints.
    o.step = 1.0 / (3.0 * 300 * pot->constants().M_tilde);
    const ModeResult r = saga_sgd_minimize(*pot, o);
    CHECK(r.converged);
    REQUIRE(r.checkpoint_values.size() >= 2);
    for (std::size_t k = 1; k < r.checkpoint_values.size(); ++k)
      CHECK(r.checkpoint_values[k] <=
            r.checkpoint_values[k - 1] + 1e-12 * std::abs(r.checkpoint_values[k - 1]));
    CHECK(norm(pot->grad_full(r.x_star)) <= r.tolerance);
  }
}

TEST_CASE("deterministic given the seed") {
  const Dataset data = generate_synthetic(ModelKind::kLogistic, 100, 3, 8);
  const auto pot = make_potential(data);
  MinimizeOptions o;
  o.seed = 11;
  const ModeResult a = saga_sgd_minimize(*pot, o);
  const ModeResult b = saga_sgd_minimize(*pot, o);
  CHECK(a.x_star == b.x_star);
  CHECK(a.iterations == b.iterations);
  CHECK(a.gradient_queries == b.gradient_queries);
}

TEST_CASE("log-normal mode location is the mean of the logs") {
  SyntheticParams p;
  p.lognormal_mu = 1.0;
  p.lognormal_sigma = 0.5;
  const Dataset data = generate_synthetic(ModelKind::kLogNormal, 200, 0, 4, p);
  const auto pot = make_potential(data);
  MinimizeOptions o;
  o.step = 1e-3;
  o.max_iters = 200000;
  const ModeResult r = saga_sgd_minimize(*pot, o);
  CHECK(r.converged);
  double mean = 0.0;
  for (double x : data.features) mean += std::log(x);
  mean /= 200.0;
  CHECK(r.x_star[0] == doctest::Approx(mean).epsilon(1e-4));
}
