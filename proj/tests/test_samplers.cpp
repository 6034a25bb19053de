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

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "vrlmc/error.hpp"
#include "vrlmc/optimizer.hpp"
#include "vrlmc/potentials.hpp"
#include "vrlmc/samplers.hpp"

using namespace vrlmc;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

struct BigCoefficients {
  Big gap, s_xx, s_vv, s_xv;
};

// Closed forms evaluated with 50 significant digits.
BigCoefficients big_closed_form(double t_in, double M_in) {
  const Big t(t_in), M(M_in);
  const Big e2 = exp(-2 * t), e4 = exp(-4 * t);
  BigCoefficients c;
  c.gap = t - (1 - e2) / 2;
  c.s_xx = (t - e4 / 4 - Big(3) / 4 + e2) / M;
  c.s_vv = (1 - e4) / M;
  c.s_xv = (1 + e4 - 2 * e2) / (2 * M);
  return c;
}

double rel(double a, const Big& b) {
  return std::abs(static_cast<double>((Big(a) - b) / b));
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments pooled_moments(const std::vector<double>& values) {
  Moments m;
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  for (double v : values) m.var += (v - m.mean) * (v - m.mean);
  m.var /= static_cast<double>(values.size() - 1);
  return m;
}

}  // namespace

TEST_CASE("overdamped step") {
  CHECK(overdamped_step(Vector{0}, Vector{0}, 0.1, Vector{0})[0] == 0.0);
  CHECK(overdamped_step(Vector{1}, Vector{2}, 0.1, Vector{0})[0] ==
        doctest::Approx(0.8).epsilon(1e-15));
  CHECK(overdamped_step(Vector{1}, Vector{2}, 0.1, Vector{1})[0] ==
        doctest::Approx(1.247214).epsilon(1e-6));
  CHECK_THROWS_AS(overdamped_step(Vector{1}, Vector{2}, 0.0, Vector{0}), ConfigError);
  CHECK_THROWS_AS(overdamped_step(Vector{NAN}, Vector{2}, 0.1, Vector{0}),
                  NumericalError);
  Rng a(3), b(3);
  CHECK(overdamped_step(Vector{1, 2}, Vector{0, 1}, 0.1, a) ==
        overdamped_step(Vector{1, 2}, Vector{0, 1}, 0.1, b));
}

TEST_CASE("underdamped moments") {
  SUBCASE("drift free") {
    const auto m = uld_moments(Vector{1.5}, Vector{0}, Vector{0}, 0.3, 2.0);
    CHECK(m.mean_v[0] == 0.0);
    CHECK(m.mean_x[0] == 1.5);
  }
  SUBCASE("half decay") {
    const double t = std::numbers::ln2 / 2;
    const auto m = uld_moments(Vector{0}, Vector{1}, Vector{1}, t, 1.0);
    CHECK(m.mean_v[0] == doctest::Approx(0.25).epsilon(1e-14));
    // 1/4 + (-1/2)(ln2/2 - 1/4)
    CHECK(m.mean_x[0] == doctest::Approx(0.25 - 0.5 * (t - 0.25)).epsilon(1e-14));
  }
  SUBCASE("long horizon limits") {
    const auto m = uld_moments(Vector{0}, Vector{0}, Vector{0}, 400.0, 4.0);
    CHECK(m.s_vv == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(m.s_xv == doctest::Approx(0.125).epsilon(1e-15));
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(uld_moments(Vector{0}, Vector{0}, Vector{0}, -1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(uld_moments(Vector{0}, Vector{0}, Vector{0}, 1.0, 0.0), ConfigError);
  }
}

TEST_CASE("underdamped covariance is PSD and vanishes with the step") {
  double prev = INFINITY;
  for (double t = 10.0; t > 1e-14; t /= 3.7) {
    const auto c = uld_coefficients(t, 1.0);
    CHECK(c.s_xx >= 0.0);
    CHECK(c.s_vv >= 0.0);
    CHECK(c.s_xx * c.s_vv - c.s_xv * c.s_xv >= -1e-12);
    CHECK(c.s_xx + c.s_vv + c.s_xv <= prev);
    prev = c.s_xx + c.s_vv + c.s_xv;
  }
  CHECK(prev < 1e-12);
}

TEST_CASE("stable coefficients agree with high-precision closed forms") {
  for (double M : {0.5, 1.0, 37.0}) {
    for (double t : {1e-8, 1e-6, 1e-4, 1e-3, 0.1, 0.49, 0.5, 0.51, 2.0, 9.0}) {
      const auto c = uld_coefficients(t / M, M);
      const auto big = big_closed_form(t, M);
      CHECK(rel(c.s_xx, big.s_xx) < 1e-12);
      CHECK(rel(c.s_vv, big.s_vv) < 1e-12);
      CHECK(rel(c.s_xv, big.s_xv) < 1e-12);
      CHECK(rel(-2 * M * c.x_from_g, big.gap) < 1e-12);
    }
  }
  // The double-precision closed form loses digits for small t.
  const auto naive = uld_coefficients_closed_form(1e-4, 1.0);
  const auto stable = uld_coefficients(1e-4, 1.0);
  CHECK(std::abs(stable.s_xx / naive.s_xx - 1.0) < 1e-3);
  CHECK(rel(stable.s_xx, big_closed_form(1e-4, 1.0).s_xx) < 1e-6);
}

TEST_CASE("underdamped step") {
  SUBCASE("zero normals return the mean") {
    const Vector x{0.3, -1}, v{1, 2}, g{0.5, -0.5};
    const auto c = uld_coefficients(0.2, 3.0);
    const auto m = uld_moments(x, v, g, 0.2, 3.0);
    const PhasePoint p = uld_step(x, v, g, c, Vector(4, 0.0));
    CHECK(p.x == m.mean_x);
    CHECK(p.v == m.mean_v);
  }
  SUBCASE("tiny step stays finite") {
    Rng rng(1);
    const PhasePoint p = uld_step(Vector{1}, Vector{1}, Vector{1}, 1e-12, 1.0, rng);
    CHECK(std::isfinite(p.x[0]));
    CHECK(std::isfinite(p.v[0]));
    const PhasePoint q = uld_step(Vector{1}, Vector{1}, Vector{1}, 1e-120, 1.0, rng);
    CHECK(std::isfinite(q.x[0]));
    CHECK(std::isfinite(q.v[0]));
  }
  SUBCASE("wrong normal count") {
    const auto c = uld_coefficients(0.2, 3.0);
    CHECK_THROWS_AS(uld_step(Vector{0}, Vector{0}, Vector{0}, c, Vector{0}),
                    std::invalid_argument);
  }
}

TEST_CASE("underdamped step moments by Monte Carlo") {
  const Vector x{0.5}, v{-1.0}, g{2.0};
  const double delta = 0.1, M = 1.0;
  const auto m = uld_moments(x, v, g, delta, M);
  Rng rng(77);
  constexpr int kDraws = 200000;
  double sx = 0, sv = 0, sxx = 0, svv = 0, sxv = 0;
  double qxx = 0, qvv = 0;
  for (int k = 0; k < kDraws; ++k) {
    const PhasePoint p = uld_step(x, v, g, delta, M, rng);
    const double dx = p.x[0] - m.mean_x[0], dv = p.v[0] - m.mean_v[0];
    sx += dx;
    sv += dv;
    sxx += dx * dx;
    svv += dv * dv;
    sxv += dx * dv;
    qxx += dx * dx * dx * dx;
    qvv += dv * dv * dv * dv;
  }
  const double n = kDraws;
  CHECK(std::abs(sx / n) < 4 * std::sqrt(m.s_xx / n));
  CHECK(std::abs(sv / n) < 4 * std::sqrt(m.s_vv / n));
  CHECK(std::abs(sxx / n - m.s_xx) < 4 * std::sqrt((qxx / n - m.s_xx * m.s_xx) / n));
  CHECK(std::abs(svv / n - m.s_vv) < 4 * std::sqrt((qvv / n - m.s_vv * m.s_vv) / n));
  const double cross_var = m.s_xx * m.s_vv + m.s_xv * m.s_xv;
  CHECK(std::abs(sxv / n - m.s_xv) < 4 * std::sqrt(cross_var / n));
}

TEST_CASE("method names") {
  for (Method m : {Method::kLD, Method::kULD, Method::kSGLD, Method::kSGULD,
                   Method::kSagaLD, Method::kSvrgLD1, Method::kSvrgLD2,
                   Method::kCvLD, Method::kCvULD})
    CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("HMC"), ConfigError);
}

TEST_CASE("query accounting") {
  const Dataset data = generate_synthetic(ModelKind::kLogistic, 600, 5, 1);
  const auto pot = make_potential(data);
  const ModeResult mode = saga_sgd_minimize(*pot);
  REQUIRE(mode.converged);
  ChainConfig cfg;
  cfg.delta = 1e-4;
  cfg.batch_size = 10;
  cfg.iters = 250;
  cfg.tau = 60;
  cfg.center = mode.x_star;
  const std::uint64_t N = 600, n = 10, K = 250;
  CHECK(run_chain(Method::kSagaLD, *pot, cfg).gradient_queries == N + n * K);
  CHECK(run_chain(Method::kLD, *pot, cfg).gradient_queries == N * K);
  CHECK(run_chain(Method::kULD, *pot, cfg).gradient_queries == N * K);
  CHECK(run_chain(Method::kSGLD, *pot, cfg).gradient_queries == n * K);
  CHECK(run_chain(Method::kSGULD, *pot, cfg).gradient_queries == n * K);
  // Refreshes at k = 0, 60, 120, 180, 240.
  CHECK(run_chain(Method::kSvrgLD1, *pot, cfg).gradient_queries == 5 * N + 2 * n * K);
  CHECK(run_chain(Method::kSvrgLD2, *pot, cfg).gradient_queries == 5 * N + 2 * n * K);
  CHECK(run_chain(Method::kCvLD, *pot, cfg).gradient_queries == N + 2 * n * K);
  CHECK(run_chain(Method::kCvULD, *pot, cfg).gradient_queries == N + 2 * n * K);
}

TEST_CASE("chains are deterministic and record burn-in and thinning") {
  const Dataset data = generate_synthetic(ModelKind::kLogistic, 100, 3, 2);
  const auto pot = make_potential(data);
  ChainConfig cfg;
  cfg.delta = 1e-3;
  cfg.iters = 500;
  cfg.burn_in = 100;
  cfg.thin = 7;
  cfg.tau = 20;
  cfg.seed = 5;
  cfg.center = Vector(3, 0.0);
  cfg.keep_velocity = true;
  for (Method m : {Method::kSGLD, Method::kSvrgLD1, Method::kSGULD}) {
    const ChainOutput a = run_chain(m, *pot, cfg);
    const ChainOutput b = run_chain(m, *pot, cfg);
    CHECK(a.samples == b.samples);
    CHECK(a.velocities == b.velocities);
    CHECK(a.gradient_queries == b.gradient_queries);
    REQUIRE(a.num_samples() == 57);
    CHECK(a.sample_iters.front() == 107);
    CHECK(a.sample_iters.back() == 499);
    CHECK(a.velocities.size() == (is_underdamped(m) ? 57 * 3 : 0));
  }
  ChainConfig other = cfg;
  other.replica = 1;
  CHECK(run_chain(Method::kSGLD, *pot, cfg).samples !=
        run_chain(Method::kSGLD, *pot, other).samples);
}

TEST_CASE("observer sees checkpoints") {
  GaussianTarget t({1, 3}, 1, 1.0);
  ChainConfig cfg;
  cfg.iters = 100;
  cfg.observe_every = 25;
  std::vector<std::size_t> seen;
  std::vector<std::uint64_t> queries;
  cfg.observer = [&](const ChainProgress& p) {
    seen.push_back(p.iteration);
    queries.push_back(p.gradient_queries);
  };
  run_chain(Method::kLD, t, cfg);
  CHECK(seen == std::vector<std::size_t>{25, 50, 75, 100});
  CHECK(queries == std::vector<std::uint64_t>{50, 100, 150, 200});
}

TEST_CASE("configuration errors") {
  GaussianTarget t({1, 3}, 1, 1.0);
  ChainConfig cfg;
  CHECK_THROWS_AS(run_chain(Method::kSvrgLD2, t, cfg), ConfigError);
  CHECK_THROWS_AS(run_chain(Method::kCvLD, t, cfg), ConfigError);
  cfg.delta = -1;
  CHECK_THROWS_AS(run_chain(Method::kLD, t, cfg), ConfigError);
  LogNormalModel ln({1.0, 2.0, 3.0});
  ChainConfig ok;
  CHECK_THROWS_AS(run_chain(Method::kULD, ln, ok), ConstantsUnavailable);
  CHECK(run_chain(Method::kLD, ln, ok).num_samples() > 0);
  ChainConfig huge;
  huge.delta = 10.0;
  CHECK_THROWS_AS(run_chain(Method::kLD, t, huge), NumericalError);
}

TEST_CASE("step decay schedule") {
  GaussianTarget t({0}, 1, 1.0);
  ChainConfig cfg;
  cfg.iters = 50;
  cfg.delta = 0.5;
  cfg.step_decay = 0.5;
  cfg.min_delta = 1e-3;
  CHECK(run_chain(Method::kLD, t, cfg).num_samples() == 45);
  cfg.step_decay = 1.5;
  CHECK_THROWS_AS(run_chain(Method::kLD, t, cfg), ConfigError);
}

TEST_CASE("LD recovers the two-point gaussian posterior") {
  GaussianTarget t({1, 3}, 1, 1.0);
  ChainConfig cfg;
  cfg.delta = 1e-3 * 1.0 / 2.0;
  cfg.iters = 200000;
  cfg.burn_in = 10000;
  cfg.seed = 2026;
  // Each chain has about 95 effective samples; pooling replicas keeps the
  // tolerances several standard errors wide.
  std::vector<double> pooled;
  for (std::uint64_t r = 0; r < 8; ++r) {
    cfg.replica = r;
    const ChainOutput out = run_chain(Method::kLD, t, cfg);
    pooled.insert(pooled.end(), out.samples.begin(), out.samples.end());
  }
  const Moments m = pooled_moments(pooled);
  CHECK(std::abs(m.mean - 2.0) < 0.05);
  CHECK(std::abs(m.var / 0.5 - 1.0) < 0.15);
}

TEST_CASE("underdamped velocity variance is stationary at 1/M") {
  GaussianTarget t(std::vector<double>(20 * 4, 0.5), 4, 1.0);  // N=20, d=4
  const double M = 20.0;
  ChainConfig cfg;
  cfg.delta = 0.05 / M;
  cfg.iters = 100000;
  cfg.keep_velocity = true;
  cfg.seed = 9;
  const ChainOutput out = run_chain(Method::kULD, t, cfg);
  std::vector<double> vs(out.velocities.begin(), out.velocities.end());
  const Moments m = pooled_moments(vs);
  CHECK(std::abs(m.var * M - 1.0) < 0.1);
}

TEST_CASE("CV-ULD on a gaussian tracks full-gradient ULD") {
  GaussianTarget t({0.2, 1.0, -0.4, 1.5, 0.3, 0.0}, 2, 0.8);
  const Vector mode = t.posterior_mean();
  ChainConfig cfg;
  cfg.delta = 0.1 / t.constants().M;
  cfg.iters = 20000;
  cfg.batch_size = 1;
  cfg.seed = 4;
  cfg.init = mode;
  cfg.center = mode;
  const ChainOutput full = run_chain(Method::kULD, t, cfg);
  const ChainOutput cv = run_chain(Method::kCvULD, t, cfg);
  REQUIRE(full.num_samples() == cv.num_samples());
  double worst = 0.0;
  for (std::size_t k = 0; k < cv.samples.size(); ++k)
    worst = std::max(worst, std::abs(cv.samples[k] - full.samples[k]));
  CHECK(worst < 1e-9);
  CHECK(cv.diagnostics.max_running_kinetic <= 2 * 26.0 * 2 / t.constants().m);
  CHECK(cv.diagnostics.max_running_center_dist <= 2 * 10.0 * 2 / t.constants().m);
}
