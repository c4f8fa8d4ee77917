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

#include "spinperc_cli/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "spinperc_cli/version.hpp"

namespace spinperc::cli {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> RunContext::header_lines() const {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
  std::vector<std::string> lines;
  lines.push_back("tool=spinperc version=" + std::string(kVersion) + " command=" + command +
                  " config_hash=" + hash + " seed=" + std::to_string(seed));
  std::istringstream in(resolved_config);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const RunContext& ctx, const std::string& file,
                     const std::vector<std::string>& columns)
    : columns_(columns.size()), path_(ctx.path(file)) {
  out_.open(path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot open " + path_.string());
  for (const std::string& line : ctx.header_lines()) out_ << "# " << line << '\n';
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw std::runtime_error("failed writing " + path_.string());
}

EstimateTable::EstimateTable(const RunContext& ctx, const std::string& file)
    : csv_(ctx, file,
           {"param", "beta", "tau", "rho_or_t", "n", "m", "mean", "stderr", "replicates", "seed"}),
      seed_(ctx.seed) {}

void EstimateTable::add(const EstimateRow& r) {
  csv_.row({r.param, format_double(r.beta), format_double(r.tau), format_double(r.rho_or_t),
            std::to_string(r.n), std::to_string(r.m), format_double(r.mean),
            format_double(r.std_error), std::to_string(r.replicates), std::to_string(seed_)});
}

}  // namespace spinperc::cli
