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

#include "vrlmc/config.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "vrlmc/dataset_io.hpp"
#include "vrlmc/error.hpp"

namespace vrlmc {

namespace {

std::string trimmed(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, std::string_view source) {
  KeyValueConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trimmed(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = trimmed(std::string_view(body).substr(0, eq));
    if (key.empty())
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) +
                        ": empty key");
    cfg.set(std::move(key), trimmed(std::string_view(body).substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::parse_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in, "<string>");
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse(in, path);
}

void KeyValueConfig::set(std::string key, std::string value) {
  entries_.insert_or_assign(std::move(key), std::move(value));
}

void KeyValueConfig::merge(const KeyValueConfig& other) {
  for (const auto& [k, v] : other.entries_) set(k, v);
}

bool KeyValueConfig::contains(std::string_view key) const {
  return entries_.find(key) != entries_.end();
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_or(std::string_view key,
                                   std::string fallback) const {
  return get(key).value_or(std::move(fallback));
}

std::optional<double> KeyValueConfig::get_double(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  return parse_double(*v, key);
}

std::optional<std::uint64_t> KeyValueConfig::get_u64(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  return parse_u64(*v, key);
}

std::optional<bool> KeyValueConfig::get_bool(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  if (*v == "1" || *v == "true" || *v == "yes") return true;
  if (*v == "0" || *v == "false" || *v == "no") return false;
  throw ConfigError("invalid boolean for " + std::string(key) + ": '" + *v + "'");
}

std::optional<std::vector<std::string>> KeyValueConfig::get_list(
    std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  std::vector<std::string> items;
  std::string_view rest = *v;
  while (true) {
    const auto comma = rest.find(',');
    std::string item = trimmed(rest.substr(0, comma));
    if (item.empty())
      throw ConfigError("empty item in list for " + std::string(key));
    items.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return items;
}

std::optional<std::vector<double>> KeyValueConfig::get_double_list(
    std::string_view key) const {
  const auto items = get_list(key);
  if (!items) return std::nullopt;
  std::vector<double> out;
  for (const auto& s : *items) out.push_back(parse_double(s, key));
  return out;
}

std::optional<std::vector<std::uint64_t>> KeyValueConfig::get_u64_list(
    std::string_view key) const {
  const auto items = get_list(key);
  if (!items) return std::nullopt;
  std::vector<std::uint64_t> out;
  for (const auto& s : *items) out.push_back(parse_u64(s, key));
  return out;
}

std::vector<std::string> KeyValueConfig::unknown_keys(
    const std::vector<std::string_view>& known,
    const std::vector<std::string_view>& known_prefixes) const {
  std::vector<std::string> unknown;
  for (const auto& [k, v] : entries_) {
    const bool exact = std::find(known.begin(), known.end(), k) != known.end();
    const bool prefixed =
        std::any_of(known_prefixes.begin(), known_prefixes.end(),
                    [&](std::string_view p) { return k.rfind(p, 0) == 0; });
    if (!exact && !prefixed) unknown.push_back(k);
  }
  return unknown;
}

void KeyValueConfig::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

}  // namespace vrlmc
