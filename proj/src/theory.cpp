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

#include "vrlmc/theory.hpp"

#include <cmath>

#include "vrlmc/error.hpp"

namespace vrlmc {

namespace {

// e^{-rate T} W0, with the T = infinity and W0 = 0 corners kept at zero.
double transient(double rate, double T, double w0) {
  if (w0 == 0.0) return 0.0;
  return std::exp(-rate * T) * w0;
}

double require_L(const BoundInputs& in, const char* who) {
  if (!in.L) throw ConfigError(std::string(who) + " requires L");
  return *in.L;
}

void check(BoundResult& r, bool ok, const std::string& what) {
  if (ok) return;
  r.precondition_ok = false;
  if (!r.message.empty()) r.message += "; ";
  r.message += what;
}

}  // namespace

BoundResult sgld_bound(const BoundInputs& in) {
  if (!in.sigma) throw ConfigError("sgld_bound requires sigma");
  const double L = require_L(in, "sgld_bound");
  const double sd = std::sqrt(in.d);
  BoundResult r;
  r.value = transient(in.delta * in.m, in.T, in.w2_init) +
            in.delta * L * in.d / (2.0 * in.m) +
            11.0 * in.delta * std::pow(in.M, 1.5) * sd / (5.0 * in.m) +
            *in.sigma * std::sqrt(in.delta * in.d) / (2.0 * std::sqrt(in.m));
  return r;
}

BoundResult saga_bound(const BoundInputs& in) {
  const double L = require_L(in, "saga_bound");
  const double sd = std::sqrt(in.d);
  BoundResult r;
  r.value = 5.0 * transient(in.m * in.delta / 4.0, in.T, in.w2_init) +
            2.0 * in.delta * L * in.d / in.m +
            2.0 * in.delta * std::pow(in.M, 1.5) * sd / in.m +
            24.0 * in.delta * in.M * std::sqrt(in.d * in.N) /
                (std::sqrt(in.m) * in.n);
  check(r, in.delta < in.n / (8.0 * in.M * in.N), "delta < n/(8MN) violated");
  check(r, in.n >= 9.0, "n >= 9 violated");
  return r;
}

BoundResult svrg_bound(const BoundInputs& in, SvrgOption option) {
  const double L = require_L(in, "svrg_bound");
  if (!in.tau) throw ConfigError("svrg_bound requires tau");
  const double tau = *in.tau;
  const double sd = std::sqrt(in.d);
  const double m15 = std::pow(in.M, 1.5);
  BoundResult r;
  if (option == SvrgOption::kI) {
    r.value = transient(in.delta * in.m / 56.0, in.T, in.w2_init) *
                  std::sqrt(in.M / in.m) +
              2.0 * in.delta * L * in.d / in.m +
              2.0 * in.delta * m15 * sd / in.m +
              64.0 * m15 * std::sqrt(in.delta * in.d) /
                  (in.m * std::sqrt(in.n));
    check(r, in.delta < 1.0 / (8.0 * in.M), "delta < 1/(8M) violated");
    check(r, in.n >= 2.0, "n >= 2 violated");
    check(r, tau >= 8.0 / (in.m * in.delta), "tau >= 8/(m delta) violated");
    if (std::isfinite(in.T))
      check(r, std::fmod(in.T, tau) == 0.0, "T is not a multiple of tau");
  } else {
    r.value = transient(in.delta * in.m / 4.0, in.T, in.w2_init) +
              std::sqrt(2.0) * in.delta * L * in.d / in.m +
              5.0 * in.delta * m15 * sd / in.m +
              9.0 * in.delta * in.M * tau * sd / std::sqrt(in.m * in.n);
    check(r, in.delta < std::sqrt(in.n) / (4.0 * tau * in.M),
          "delta < sqrt(n)/(4 tau M) violated");
  }
  return r;
}

BoundResult cvuld_bound(const BoundInputs& in) {
  const double sd = std::sqrt(in.d);
  const double m15 = std::pow(in.m, 1.5);
  BoundResult r;
  r.value = 4.0 * transient(in.m * in.delta / 2.0, in.T, in.w2_init) +
            164.0 * in.delta * in.M * in.M * sd / m15 +
            83.0 * in.M * sd / (m15 * std::sqrt(in.n));
  check(r, in.delta < 1.0 / in.M, "delta < 1/M violated");
  return r;
}

double init_w2_bound(double d, double m) { return std::sqrt(2.0 * d / m); }
double kinetic_bound(double d, double m) { return 26.0 * d / m; }
double position_var_bound(double d, double m) { return 10.0 * d / m; }
double posterior_var_bound(double d, double m) { return d / m; }

ComplexityPrediction complexity_predict(const ComplexityQuery& q) {
  if (!(q.kappa >= 1.0)) throw ConfigError("kappa must be >= 1");
  if (!(q.epsilon > 0.0 && q.epsilon <= 1.0))
    throw ConfigError("epsilon must lie in (0, 1]");
  if (!(q.d > 0.0 && q.N > 0.0 && q.n > 0.0))
    throw ConfigError("d, N and n must be positive");
  const double k = q.kappa, d = q.d, N = q.N, e = q.epsilon, n = q.n;
  const double sd = std::sqrt(d), sN = std::sqrt(N);
  ComplexityPrediction p;
  switch (q.algorithm) {
    case Method::kLD:
      p.mixing = k * k * sd / (sN * e);
      p.computation = k * k * std::sqrt(d * N) / e;
      break;
    case Method::kULD:
      p.mixing = std::pow(k, 2.5) * sd / (sN * e);
      p.computation = std::pow(k, 2.5) * std::sqrt(d * N) / e;
      break;
    case Method::kSGLD:
    case Method::kSGULD:
      p.mixing = k * k * d / (n * e * e);
      p.computation = k * k * d / (e * e);
      break;
    case Method::kSagaLD:
      p.mixing = std::pow(k, 1.5) * sd / (n * e);
      p.computation = N + std::pow(k, 1.5) * sd / e;
      break;
    case Method::kSvrgLD1:
      p.mixing = k * k * k * d / (n * e * e);
      p.computation = N + k * k * k * d / (e * e);
      break;
    case Method::kSvrgLD2:
      p.mixing = std::pow(k, 11.0 / 6.0) * sd / (std::pow(N, 2.0 / 3.0) * e);
      p.computation =
          N + std::pow(k, 5.0 / 3.0) * std::pow(N, 1.0 / 6.0) * sd / e;
      break;
    case Method::kCvLD:
      p.mixing = k * k * k * d / (N * e * e);
      p.computation = N + std::pow(k, 6.0) * d * d / (N * N * std::pow(e, 4.0));
      break;
    case Method::kCvULD:
      p.mixing = std::pow(k, 2.5) * sd / (sN * e);
      p.computation =
          N + std::pow(k, 5.5) * std::pow(d, 1.5) / (std::pow(N, 1.5) * e * e * e);
      break;
  }
  return p;
}

RegimeThresholds regime_thresholds(double d, double N) {
  if (!(d > 0.0 && N > 0.0)) throw ConfigError("d and N must be positive");
  const double sd = std::sqrt(d);
  return {sd / std::sqrt(N), sd / std::pow(N, 5.0 / 6.0)};
}

std::string_view regime_classify(double d, double N, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  const RegimeThresholds t = regime_thresholds(d, N);
  if (epsilon >= t.upper) return kRegimeSgld;
  if (epsilon >= t.lower) return kRegimeComparable;
  return kRegimeSaga;
}

}  // namespace vrlmc
