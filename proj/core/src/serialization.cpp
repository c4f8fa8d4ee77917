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

#include "spinperc/serialization.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace spinperc {

namespace {

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");

class Writer {
 public:
  template <typename T>
  void put(T v) {
    std::uint8_t buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.insert(out_.end(), buf, buf + sizeof(T));
  }
  void put_bytes(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > in_.size()) throw std::runtime_error("PSP1: truncated input");
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void put_header(Writer& w, const BoxRegion& region, double horizon, std::uint32_t k,
                std::uint64_t count) {
  w.put_bytes("PSP1", 4);
  w.put<std::uint16_t>(kSerializationVersion);
  w.put<std::int32_t>(region.origin().x);
  w.put<std::int32_t>(region.origin().y);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(region.width()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(region.height()));
  w.put<double>(horizon);
  w.put<std::uint32_t>(k);
  w.put<std::uint64_t>(count);
}

struct Header {
  BoxRegion region;
  double horizon;
  std::uint32_t k;
  std::uint64_t count;
};

Header get_header(Reader& r) {
  const char magic[4] = {static_cast<char>(r.get<std::uint8_t>()), static_cast<char>(r.get<std::uint8_t>()),
                         static_cast<char>(r.get<std::uint8_t>()), static_cast<char>(r.get<std::uint8_t>())};
  if (std::memcmp(magic, "PSP1", 4) != 0) throw std::runtime_error("PSP1: bad magic");
  if (r.get<std::uint16_t>() != kSerializationVersion) {
    throw std::runtime_error("PSP1: unsupported version");
  }
  const auto x = r.get<std::int32_t>();
  const auto y = r.get<std::int32_t>();
  const auto w = r.get<std::uint32_t>();
  const auto h = r.get<std::uint32_t>();
  if (w == 0 || h == 0 || w > 0x7fffffffu || h > 0x7fffffffu) {
    throw std::runtime_error("PSP1: bad region extent");
  }
  Header hd{BoxRegion({x, y}, static_cast<std::int32_t>(w), static_cast<std::int32_t>(h)), 0, 0, 0};
  hd.horizon = r.get<double>();
  hd.k = r.get<std::uint32_t>();
  hd.count = r.get<std::uint64_t>();
  return hd;
}

}  // namespace

std::vector<std::uint8_t> serialize(const MarkSet& marks) {
  Writer w;
  put_header(w, marks.region(), marks.horizon(), marks.thickening(), marks.size());
  for (const Mark& m : marks.marks()) {
    w.put<std::int32_t>(m.site.x);
    w.put<std::int32_t>(m.site.y);
    w.put<double>(m.time);
    w.put<double>(m.rate_uniform);
    w.put<std::uint8_t>(m.keep ? 1 : 0);
  }
  return w.take();
}

std::vector<std::uint8_t> serialize(const SeedField& seeds) {
  Writer w;
  put_header(w, seeds.region(), 0.0, 0, seeds.uniforms().size());
  for (double u : seeds.uniforms()) w.put<double>(u);
  return w.take();
}

MarkSet deserialize_marks(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const Header hd = get_header(r);
  if (hd.k == 0) throw std::runtime_error("PSP1: payload is a seed field, not a mark set");
  if (r.remaining() != hd.count * kMarkRecordBytes) throw std::runtime_error("PSP1: size mismatch");
  std::vector<Mark> marks(hd.count);
  std::vector<std::uint32_t> per_site(hd.region.size(), 0);
  for (auto& m : marks) {
    m.site.x = r.get<std::int32_t>();
    m.site.y = r.get<std::int32_t>();
    m.time = r.get<double>();
    m.rate_uniform = r.get<double>();
    m.keep = r.get<std::uint8_t>() != 0;
    if (!hd.region.contains(m.site)) throw std::runtime_error("PSP1: mark outside region");
    m.ordinal = per_site[hd.region.index_of(m.site)]++;
  }
  return MarkSet(hd.region, hd.horizon, hd.k, std::move(marks));
}

SeedField deserialize_seeds(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const Header hd = get_header(r);
  if (hd.k != 0) throw std::runtime_error("PSP1: payload is a mark set, not a seed field");
  if (hd.count != hd.region.size() || r.remaining() != hd.count * 8) {
    throw std::runtime_error("PSP1: size mismatch");
  }
  std::vector<double> u(hd.count);
  for (auto& v : u) v = r.get<double>();
  return SeedField(hd.region, std::move(u));
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace spinperc
