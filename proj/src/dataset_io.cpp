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

#include "vrlmc/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <vector>

#include "vrlmc/error.hpp"
#include "vrlmc/rng.hpp"

namespace vrlmc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string location(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() ||
      res.ptr != text.data() + text.size())
    throw ConfigError("invalid number for " + std::string(what) + ": '" +
                      std::string(text) + "'");
  return value;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() ||
      res.ptr != text.data() + text.size())
    throw ConfigError("invalid unsigned integer for " + std::string(what) +
                      ": '" + std::string(text) + "'");
  return value;
}

Dataset read_csv_dataset(std::istream& in, ModelKind kind,
                         std::string_view source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line))
    throw ConfigError(location(source, 1) + "missing header");
  // Tolerate a UTF-8 byte-order mark.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split_fields(line);

  Dataset data;
  data.kind = kind;
  const bool lognormal = kind == ModelKind::kLogNormal;
  if (lognormal) {
    if (header.size() != 1 || header[0] != "x")
      throw ConfigError(location(source, 1) +
                        "log-normal header must be the single column 'x'");
    data.cols = 1;
  } else {
    if (header.size() < 2 || header[0] != "y")
      throw ConfigError(location(source, 1) +
                        "header must be y,x1,...,xd with d >= 1");
    for (std::size_t j = 1; j < header.size(); ++j) {
      if (header[j] != "x" + std::to_string(j))
        throw ConfigError(location(source, 1) + "expected column 'x" +
                          std::to_string(j) + "', found '" +
                          std::string(header[j]) + "'");
    }
    data.cols = header.size() - 1;
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    const std::size_t expected = lognormal ? 1 : data.cols + 1;
    if (fields.size() != expected)
      throw ConfigError(location(source, line_no) + "expected " +
                        std::to_string(expected) + " fields, found " +
                        std::to_string(fields.size()));
    const std::string where = location(source, line_no);
    if (lognormal) {
      const double x = parse_double(fields[0], where + "x");
      if (!(x > 0.0) || !std::isfinite(x))
        throw ConfigError(where + "log-normal values must be positive");
      data.features.push_back(x);
    } else {
      const double y = parse_double(fields[0], where + "y");
      if (kind == ModelKind::kLogistic && y != 0.0 && y != 1.0)
        throw ConfigError(where + "logistic label must be 0 or 1");
      data.labels.push_back(y);
      for (std::size_t j = 1; j < fields.size(); ++j) {
        const double v = parse_double(fields[j], where + "x" + std::to_string(j));
        if (!std::isfinite(v))
          throw ConfigError(where + "feature values must be finite");
        data.features.push_back(v);
      }
    }
    ++data.rows;
  }
  if (data.rows == 0) throw ConfigError(std::string(source) + ": no data rows");
  if (kind == ModelKind::kGaussian) data.labels.clear();
  return data;
}

Dataset load_csv_dataset(const std::string& path, ModelKind kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset '" + path + "'");
  return read_csv_dataset(in, kind, path);
}

void write_csv_dataset(std::ostream& out, const Dataset& data) {
  if (data.kind == ModelKind::kLogNormal) {
    out << "x\n";
    for (double x : data.features) out << format_double(x) << '\n';
    return;
  }
  out << 'y';
  for (std::size_t j = 1; j <= data.cols; ++j) out << ",x" << j;
  out << '\n';
  const bool has_labels = !data.labels.empty();
  for (std::size_t i = 0; i < data.rows; ++i) {
    out << (has_labels ? format_double(data.labels[i]) : std::string("0"));
    for (double v : data.row(i)) out << ',' << format_double(v);
    out << '\n';
  }
}

void save_csv_dataset(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_csv_dataset(out, data);
}

Dataset select_rows(const Dataset& data, std::span<const std::size_t> indices) {
  Dataset out;
  out.kind = data.kind;
  out.cols = data.cols;
  out.rows = indices.size();
  out.features.reserve(indices.size() * data.cols);
  for (std::size_t i : indices) {
    if (i >= data.rows) throw std::out_of_range("select_rows: row index");
    const auto r = data.row(i);
    out.features.insert(out.features.end(), r.begin(), r.end());
    if (!data.labels.empty()) out.labels.push_back(data.labels[i]);
  }
  return out;
}

DatasetSplit split_dataset(const Dataset& data, double train_fraction,
                           std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train fraction must lie in (0, 1)");
  const auto cut = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(data.rows)));
  if (cut == 0 || cut >= data.rows)
    throw ConfigError("split leaves an empty side (" +
                      std::to_string(data.rows) + " rows, fraction " +
                      format_double(train_fraction) + ")");
  std::vector<std::size_t> order(data.rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, 0, StreamRole::kSplit);
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[rng.uniform_index(i + 1)]);
  const std::span<const std::size_t> all(order);
  return {select_rows(data, all.first(cut)), select_rows(data, all.subspan(cut))};
}

void write_samples_csv(std::ostream& out, const ChainOutput& chain) {
  const bool with_v = !chain.velocities.empty();
  out << "iter";
  for (std::size_t j = 1; j <= chain.dim; ++j) out << ",x" << j;
  if (with_v)
    for (std::size_t j = 1; j <= chain.dim; ++j) out << ",v" << j;
  out << '\n';
  for (std::size_t k = 0; k < chain.num_samples(); ++k) {
    out << chain.sample_iters[k];
    for (double x : chain.sample(k)) out << ',' << format_double(x);
    if (with_v)
      for (double v : chain.velocity(k)) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace vrlmc
