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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "vrlmc/potentials.hpp"
#include "vrlmc/samplers.hpp"

namespace vrlmc {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Strict decimal parse of a whole field; throws ConfigError on junk.
double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_u64(std::string_view text, std::string_view what);

/// Dataset CSV. Logistic and Gaussian files carry a header
/// `y,x1,...,xd`; log-normal files carry the single column `x`.
/// Errors name the offending line.
Dataset read_csv_dataset(std::istream& in, ModelKind kind,
                         std::string_view source = "<stream>");
Dataset load_csv_dataset(const std::string& path, ModelKind kind);
void write_csv_dataset(std::ostream& out, const Dataset& data);
void save_csv_dataset(const std::string& path, const Dataset& data);

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

/// Seeded shuffle then cut; the first round(fraction * rows) shuffled rows
/// form the training side.
DatasetSplit split_dataset(const Dataset& data, double train_fraction,
                           std::uint64_t seed);

/// Rows `indices` of `data`, in that order.
Dataset select_rows(const Dataset& data, std::span<const std::size_t> indices);

/// Header `iter,x1,...,xd` plus `v1..vd` when velocities were kept.
void write_samples_csv(std::ostream& out, const ChainOutput& chain);

}  // namespace vrlmc
