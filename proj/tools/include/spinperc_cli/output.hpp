// Copyright 2026 The spinperc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace spinperc::cli {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// What every output file records about the run that produced it.
struct RunContext {
  std::string command;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::filesystem::path out_dir;
  std::string resolved_config;  // TOML, one option per line
  std::uint64_t config_hash = 0;

  /// "tool=... version=... command=... config_hash=... seed=..." followed by the
  /// resolved configuration, one line each, without comment markers.
  std::vector<std::string> header_lines() const;
  std::filesystem::path path(const std::string& file) const { return out_dir / file; }
};

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// CSV writer: comment header, then a mandatory header row. LF line endings.
class CsvWriter {
 public:
  CsvWriter(const RunContext& ctx, const std::string& file, const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::filesystem::path path_;
};

/// One row of the standard estimate table
/// param,beta,tau,rho_or_t,n,m,mean,stderr,replicates,seed.
struct EstimateRow {
  std::string param;
  double beta = 0.0;
  double tau = 0.0;
  double rho_or_t = 0.0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t replicates = 0;
};

class EstimateTable {
 public:
  EstimateTable(const RunContext& ctx, const std::string& file);
  void add(const EstimateRow& row);
  void close() { csv_.close(); }

 private:
  CsvWriter csv_;
  std::uint64_t seed_;
};

}  // namespace spinperc::cli
