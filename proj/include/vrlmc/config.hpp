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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vrlmc {

/// Flat `key = value` settings. `#` starts a comment; blank lines are
/// ignored; a repeated key keeps the last value. Keys iterate in sorted
/// order.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in,
                              std::string_view source = "<stream>");
  static KeyValueConfig parse_string(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  void set(std::string key, std::string value);
  /// Copies every entry of `other` over this one.
  void merge(const KeyValueConfig& other);

  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;

  std::optional<double> get_double(std::string_view key) const;
  std::optional<std::uint64_t> get_u64(std::string_view key) const;
  std::optional<bool> get_bool(std::string_view key) const;
  /// Comma-separated list; empty items are rejected.
  std::optional<std::vector<std::string>> get_list(std::string_view key) const;
  std::optional<std::vector<double>> get_double_list(std::string_view key) const;
  std::optional<std::vector<std::uint64_t>> get_u64_list(
      std::string_view key) const;

  /// Keys neither in `known` nor starting with one of `known_prefixes`.
  std::vector<std::string> unknown_keys(
      const std::vector<std::string_view>& known,
      const std::vector<std::string_view>& known_prefixes = {}) const;

  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

  void write(std::ostream& out) const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace vrlmc
