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
#include <limits>

#include "doctest.h"
#include "vrlmc/error.hpp"
#include "vrlmc/rng.hpp"
#include "vrlmc/theory.hpp"

using namespace vrlmc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BoundInputs unit_inputs() {
  BoundInputs in;
  in.d = 1;
  in.N = 100;
  in.m = 1;
  in.M = 1;
  in.L = 1;
  in.delta = 1e-3;
  in.T = 1e4;
  in.n = 10;
  in.sigma = 1;
  in.tau = 8000;
  in.w2_init = 1;
  return in;
}

BoundInputs random_inputs(Rng& rng) {
  BoundInputs in;
  in.d = 1 + rng.uniform_index(20);
  in.N = 10 + rng.uniform_index(10000);
  in.m = 0.1 + rng.uniform() * in.N;
  in.M = in.m * (1 + 10 * rng.uniform());
  in.L = rng.uniform() * in.N;
  in.delta = 1e-6 + 1e-3 * rng.uniform();
  in.T = 1 + rng.uniform_index(100000);
  in.n = 1 + rng.uniform_index(50);
  in.sigma = rng.uniform() * 10;
  in.tau = 1 + rng.uniform_index(100);
  in.w2_init = rng.uniform() * 5;
  return in;
}

double predicted(Method m, double kappa, double d, double N, double eps, double n,
                 bool computation) {
  ComplexityQuery q;
  q.algorithm = m;
  q.kappa = kappa;
  q.d = d;
  q.N = N;
  q.epsilon = eps;
  q.n = n;
  const auto p = complexity_predict(q);
  return computation ? p.computation : p.mixing;
}

}  // namespace

TEST_CASE("sgld bound") {
  BoundInputs in = unit_inputs();
  const double expect = std::exp(-10.0) + 5e-4 + 2.2e-3 + 0.5 * std::sqrt(1e-3);
  CHECK(sgld_bound(in).value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(sgld_bound(in).value == doctest::Approx(0.0185568).epsilon(1e-6));
  in.T = kInf;
  CHECK(sgld_bound(in).value == doctest::Approx(expect - std::exp(-10.0)).epsilon(1e-12));
  in.delta = 1e-300;
  in.sigma = 0.0;
  CHECK(sgld_bound(in).value < 1e-290);
  in.sigma.reset();
  CHECK_THROWS_AS(sgld_bound(in), ConfigError);
  in = unit_inputs();
  in.L.reset();
  CHECK_THROWS_AS(sgld_bound(in), ConfigError);
}

TEST_CASE("saga bound") {
  BoundInputs in = unit_inputs();
  const auto r = saga_bound(in);
  CHECK(r.value == doctest::Approx(5 * std::exp(-2.5) + 0.028).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(0.438425).epsilon(1e-6));
  // n/(8MN) = 0.0125 > 1e-3 and n >= 9.
  CHECK(r.precondition_ok);
  in.T = kInf;
  in.d = 4;
  in.M = 3;
  in.m = 2;
  in.L = 5;
  const double sqrt_md = std::sqrt(2.0);
  const double expect = 2 * 1e-3 * 5 * 4 / 2 + 2 * 1e-3 * std::pow(3.0, 1.5) * 2 / 2 +
                        24 * 1e-3 * 3 * std::sqrt(4.0 * 100) / (sqrt_md * 10);
  CHECK(saga_bound(in).value == doctest::Approx(expect).epsilon(1e-12));
  in.n = 5;
  CHECK_FALSE(saga_bound(in).precondition_ok);
  CHECK_FALSE(saga_bound(in).message.empty());
  in.n = 10;
  in.delta = 0.1;
  CHECK_FALSE(saga_bound(in).precondition_ok);
}

TEST_CASE("svrg bounds") {
  BoundInputs in = unit_inputs();
  SUBCASE("option I") {
    in.T = 16000;
    const double expect = std::exp(-1e-3 * 16000 / 56) * 1.0 + 2e-3 + 2e-3 +
                          64 * std::sqrt(1e-3) / std::sqrt(10.0);
    const auto r = svrg_bound(in, SvrgOption::kI);
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(r.precondition_ok);  // tau = 8000 = 8/(m delta), T = 2 tau
    in.T = 12000;
    CHECK_FALSE(svrg_bound(in, SvrgOption::kI).precondition_ok);
    in.T = 16000;
    in.tau = 100;
    CHECK_FALSE(svrg_bound(in, SvrgOption::kI).precondition_ok);
    in.tau = 8000;
    in.M = 4;
    in.T = kInf;
    // sqrt(M/m) multiplies only the vanishing transient.
    const double floor = 2e-3 + 2e-3 * 8 + 64 * 8 * std::sqrt(1e-3) / std::sqrt(10.0);
    CHECK(svrg_bound(in, SvrgOption::kI).value == doctest::Approx(floor).epsilon(1e-12));
  }
  SUBCASE("option II") {
    in.tau = 10;
    const double expect = std::exp(-2.5) + std::sqrt(2.0) * 1e-3 + 5e-3 +
                          9 * 1e-3 * 10 / std::sqrt(10.0);
    const auto r = svrg_bound(in, SvrgOption::kII);
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-12));
    // sqrt(n)/(4 tau M) = 0.079
    CHECK(r.precondition_ok);
    in.tau = 1000;
    CHECK_FALSE(svrg_bound(in, SvrgOption::kII).precondition_ok);
  }
  SUBCASE("tau required") {
    in.tau.reset();
    CHECK_THROWS_AS(svrg_bound(in, SvrgOption::kII), ConfigError);
  }
}

TEST_CASE("cv-uld bound") {
  BoundInputs in = unit_inputs();
  in.L.reset();
  in.d = 4;
  in.m = 4;
  in.M = 9;
  in.T = 200;
  in.delta = 0.01;
  const double expect = 4 * std::exp(-4 * 0.01 * 200 / 2.0) * 1 +
                        164 * 0.01 * 81 * 2 / 8 + 83 * 9 * 2 / (8 * std::sqrt(10.0));
  const auto r = cvuld_bound(in);
  CHECK(r.value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.precondition_ok);
  in.delta = 1e-300;
  in.T = kInf;
  CHECK(cvuld_bound(in).value == doctest::Approx(83 * 9 * 2 / (8 * std::sqrt(10.0))));
  in.delta = 0.2;
  CHECK_FALSE(cvuld_bound(in).precondition_ok);
}

TEST_CASE("appendix constants") {
  CHECK(init_w2_bound(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(kinetic_bound(1, 1) == 26.0);
  CHECK(position_var_bound(1, 1) == 10.0);
  CHECK(posterior_var_bound(1, 1) == 1.0);
  CHECK(init_w2_bound(4, 2) == doctest::Approx(2.0));
  CHECK(kinetic_bound(4, 2) == 52.0);
  CHECK(position_var_bound(4, 2) == 20.0);
  CHECK(posterior_var_bound(4, 2) == 2.0);
  CHECK(init_w2_bound(3, 1e300) < 1e-149);
  CHECK(kinetic_bound(3, 1e300) < 1e-298);
}

TEST_CASE("bounds are monotone in T and delta") {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    BoundInputs in = random_inputs(rng);
    BoundInputs later = in;
    later.T = in.T * 2;
    BoundInputs bigger = in;
    bigger.delta = in.delta * 1.5;
    bigger.T = kInf;
    BoundInputs base = in;
    base.T = kInf;
    CHECK(sgld_bound(later).value <= sgld_bound(in).value);
    CHECK(saga_bound(later).value <= saga_bound(in).value);
    CHECK(svrg_bound(later, SvrgOption::kI).value <= svrg_bound(in, SvrgOption::kI).value);
    CHECK(svrg_bound(later, SvrgOption::kII).value <= svrg_bound(in, SvrgOption::kII).value);
    CHECK(cvuld_bound(later).value <= cvuld_bound(in).value);
    CHECK(sgld_bound(bigger).value >= sgld_bound(base).value);
    CHECK(saga_bound(bigger).value >= saga_bound(base).value);
    CHECK(svrg_bound(bigger, SvrgOption::kI).value >= svrg_bound(base, SvrgOption::kI).value);
    CHECK(svrg_bound(bigger, SvrgOption::kII).value >= svrg_bound(base, SvrgOption::kII).value);
    CHECK(cvuld_bound(bigger).value >= cvuld_bound(base).value);
  }
}

TEST_CASE("variance terms shrink as the batch grows") {
  Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    BoundInputs in = random_inputs(rng);
    in.T = kInf;
    in.n = 2;
    double prev_saga = saga_bound(in).value;
    double prev_svrg1 = svrg_bound(in, SvrgOption::kI).value;
    double prev_svrg2 = svrg_bound(in, SvrgOption::kII).value;
    for (double n = 4; n <= in.N; n *= 2) {
      in.n = n;
      CHECK(saga_bound(in).value <= prev_saga);
      CHECK(svrg_bound(in, SvrgOption::kI).value <= prev_svrg1);
      CHECK(svrg_bound(in, SvrgOption::kII).value <= prev_svrg2);
      prev_saga = saga_bound(in).value;
      prev_svrg1 = svrg_bound(in, SvrgOption::kI).value;
      prev_svrg2 = svrg_bound(in, SvrgOption::kII).value;
    }
  }
}

TEST_CASE("complexity table") {
  CHECK(predicted(Method::kSGLD, 1, 1, 1e4, 0.1, 1, false) == doctest::Approx(100.0));
  CHECK(predicted(Method::kSagaLD, 1, 1, 1e4, 0.1, 1, false) == doctest::Approx(10.0));
  CHECK(predicted(Method::kSagaLD, 1, 1, 1e4, 0.1, 1, true) == doctest::Approx(1e4 + 10.0));

  // kappa = 2, d = 4, N = 1e4, n = 10, eps = 0.01, evaluated by hand.
  const double k = 2, d = 4, N = 1e4, e = 0.01, n = 10;
  struct Row {
    Method m;
    double mixing, computation;
  };
  const Row rows[] = {
      {Method::kLD, 8.0, 80000.0},
      {Method::kULD, 4 * std::sqrt(2.0) * 2, 4 * std::sqrt(2.0) * 2 * 1e4},
      {Method::kSGLD, 16000.0, 160000.0},
      {Method::kSGULD, 16000.0, 160000.0},
      {Method::kSagaLD, 2 * std::sqrt(2.0) * 2 / 0.1, 1e4 + 2 * std::sqrt(2.0) * 2 / 0.01},
      {Method::kSvrgLD1, 32000.0, 1e4 + 320000.0},
      {Method::kSvrgLD2, std::pow(2.0, 11.0 / 6) * 2 / std::pow(1e4, 2.0 / 3) / 0.01,
       1e4 + std::pow(2.0, 5.0 / 3) * std::pow(1e4, 1.0 / 6) * 2 / 0.01},
      {Method::kCvLD, 32.0, 1e4 + 1024.0},
      {Method::kCvULD, 4 * std::sqrt(2.0) * 2, 1e4 + std::pow(2.0, 5.5) * 8 / 1e6 / 1e-6},
  };
  for (const Row& r : rows) {
    CAPTURE(to_string(r.m));
    CHECK(predicted(r.m, k, d, N, e, n, false) == doctest::Approx(r.mixing).epsilon(1e-12));
    CHECK(predicted(r.m, k, d, N, e, n, true) ==
          doctest::Approx(r.computation).epsilon(1e-12));
  }
}

TEST_CASE("complexity exponents in epsilon") {
  const double saga = predicted(Method::kSagaLD, 3, 5, 1e5, 0.02, 10, false);
  const double sgld = predicted(Method::kSGLD, 3, 5, 1e5, 0.02, 10, false);
  CHECK(predicted(Method::kSagaLD, 3, 5, 1e5, 0.01, 10, false) ==
        doctest::Approx(2 * saga));
  CHECK(predicted(Method::kSGLD, 3, 5, 1e5, 0.01, 10, false) == doctest::Approx(4 * sgld));
  ComplexityQuery bad;
  bad.kappa = 0.5;
  CHECK_THROWS_AS(complexity_predict(bad), ConfigError);
  bad.kappa = 1;
  bad.epsilon = 1.5;
  CHECK_THROWS_AS(complexity_predict(bad), ConfigError);
}

TEST_CASE("regime classification") {
  CHECK(regime_classify(1, 1e4, 0.1) == kRegimeSgld);
  CHECK(regime_classify(1, 1e4, 1e-3) == kRegimeComparable);
  CHECK(regime_classify(1, 1e4, 1e-5) == kRegimeSaga);
  CHECK(regime_thresholds(1, 1e4).lower == doctest::Approx(4.6416e-4).epsilon(1e-4));
  CHECK(regime_thresholds(1, 1e4).upper == doctest::Approx(0.01));
  // Boundaries are inclusive on the larger side.
  CHECK(regime_classify(4, 1e4, 0.02) == kRegimeSgld);
  Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const double d = 1 + rng.uniform_index(100);
    const double N = 2 + rng.uniform() * 1e7;
    const auto t = regime_thresholds(d, N);
    CHECK(std::sqrt(d) / N < t.lower);
    CHECK(t.lower < t.upper);
  }
}
