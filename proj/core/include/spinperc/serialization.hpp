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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spinperc/random_fields.hpp"

namespace spinperc {

// Binary layout "PSP1", all integers and floats little-endian:
//
//   offset  size  field
//   0       4     magic "PSP1"
//   4       2     version (u16) = 1
//   6       4     region origin x (i32)
//   10      4     region origin y (i32)
//   14      4     region width (u32)
//   18      4     region height (u32)
//   22      8     horizon (f64); 0 for a seed field
//   30      4     thickening k (u32); 0 marks a seed field
//   34      8     record count (u64)
//   42      ...   records
//
// Mark record (25 bytes): x i32, y i32, time f64, rate_uniform f64, keep u8.
// Seed record (8 bytes): U^x f64, one per site in row-major order.
inline constexpr std::uint16_t kSerializationVersion = 1;
inline constexpr std::size_t kHeaderBytes = 42;
inline constexpr std::size_t kMarkRecordBytes = 25;

std::vector<std::uint8_t> serialize(const MarkSet& marks);
std::vector<std::uint8_t> serialize(const SeedField& seeds);

/// Throws std::runtime_error on malformed input or on a payload of the other kind.
MarkSet deserialize_marks(std::span<const std::uint8_t> bytes);
SeedField deserialize_seeds(std::span<const std::uint8_t> bytes);

void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::string& path);

}  // namespace spinperc
