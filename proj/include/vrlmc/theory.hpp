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

#include <optional>
#include <string>
#include <string_view>

#include "vrlmc/estimators.hpp"
#include "vrlmc/samplers.hpp"

namespace vrlmc {

/// Parameters of the W2 convergence bounds. T may be +infinity.
struct BoundInputs {
  double d = 1.0;
  double N = 1.0;
  double m = 1.0;
  double M = 1.0;
  std::optional<double> L;      ///< Hessian Lipschitz constant.
  double delta = 0.0;
  double T = 0.0;
  double n = 1.0;
  std::optional<double> tau;    ///< SVRG epoch length.
  std::optional<double> sigma;  ///< SGLD gradient-noise scale.
  double w2_init = 0.0;
};

/// A bound value together with its preconditions. A violated precondition
/// leaves `value` evaluated and lists the violations in `message`.
struct BoundResult {
  double value = 0.0;
  bool precondition_ok = true;
  std::string message;
};

/// e^{-dmT} W0 + dLd/(2m) + 11 d M^{3/2} sqrt(d)/(5m) + sigma sqrt(dd)/(2 sqrt(m)).
/// Throws ConfigError without sigma or L.
BoundResult sgld_bound(const BoundInputs& in);

/// 5 e^{-m d T/4} W0 + 2dLd/m + 2d M^{3/2} sqrt(d)/m + 24 d M sqrt(dN)/(sqrt(m) n).
/// Requires delta < n/(8MN) and n >= 9.
BoundResult saga_bound(const BoundInputs& in);

/// Option I:
///   e^{-dmT/56} sqrt(M/m) W0 + 2dLd/m + 2dM^{3/2}sqrt(d)/m
///   + 64 M^{3/2} sqrt(dd)/(m sqrt(n)),
///   requiring delta < 1/(8M), n >= 2, tau >= 8/(m delta), tau | T.
/// Option II:
///   e^{-dmT/4} W0 + sqrt(2) dLd/m + 5dM^{3/2}sqrt(d)/m
///   + 9 d M tau sqrt(d)/sqrt(mn),
///   requiring delta < sqrt(n)/(4 tau M).
BoundResult svrg_bound(const BoundInputs& in, SvrgOption option);

/// 4 e^{-m d T/2} W0 + 164 d M^2 sqrt(d)/m^{3/2} + 83 M sqrt(d)/(m^{3/2} sqrt(n)).
/// Requires delta < 1/M. L is not used.
BoundResult cvuld_bound(const BoundInputs& in);

double init_w2_bound(double d, double m);        ///< sqrt(2d/m)
double kinetic_bound(double d, double m);        ///< 26 d/m
double position_var_bound(double d, double m);   ///< 10 d/m
double posterior_var_bound(double d, double m);  ///< d/m

/// A Table 1 lookup. `n` only enters the SGLD/SGULD/SAGA-LD/SVRG-LD (I)
/// mixing times.
struct ComplexityQuery {
  Method algorithm = Method::kLD;
  double kappa = 1.0;
  double d = 1.0;
  double N = 1.0;
  double epsilon = 0.1;
  double n = 1.0;
};

/// Predicted orders, constants taken as 1. Not bounds.
struct ComplexityPrediction {
  double mixing = 0.0;
  double computation = 0.0;
};

ComplexityPrediction complexity_predict(const ComplexityQuery& q);

inline constexpr std::string_view kRegimeSgld = "SGLD";
inline constexpr std::string_view kRegimeComparable =
    "SAGA-LD/CV-LD (comparable)";
inline constexpr std::string_view kRegimeSaga = "SAGA-LD";

struct RegimeThresholds {
  double upper = 0.0;  ///< sqrt(d)/sqrt(N)
  double lower = 0.0;  ///< sqrt(d)/N^{5/6}
};

RegimeThresholds regime_thresholds(double d, double N);

/// Fastest method for accuracy epsilon: >= upper gives SGLD, [lower, upper)
/// the comparable regime, below lower SAGA-LD.
std::string_view regime_classify(double d, double N, double epsilon);

}  // namespace vrlmc
