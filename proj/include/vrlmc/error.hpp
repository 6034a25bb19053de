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

#include <stdexcept>
#include <string>

namespace vrlmc {

/// Invalid user input: bad flags, malformed files, unmet preconditions.
/// The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Divergence, non-finite state, indefinite covariance. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The model does not satisfy the smoothness / convexity assumptions, so no
/// constants can be reported.
class ConstantsUnavailable : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace vrlmc
