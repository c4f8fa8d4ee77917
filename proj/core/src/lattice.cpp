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

#include "spinperc/lattice.hpp"

#include <algorithm>

namespace spinperc {

std::array<Site, 4> neighbors4(Site s) noexcept {
  return {s + kSteps4[0], s + kSteps4[1], s + kSteps4[2], s + kSteps4[3]};
}

std::array<Site, 8> neighbors8(Site s) noexcept {
  std::array<Site, 8> out{};
  for (std::size_t i = 0; i < 8; ++i) out[i] = s + kSteps8[i];
  return out;
}

BoxRegion::BoxRegion(Site origin, std::int32_t width, std::int32_t height)
    : origin_(origin), width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("box width and height must be >= 1");
}

BoxRegion BoxRegion::crossing_box(std::int32_t n, std::int32_t m) {
  if (n < 0 || m < 0) throw std::invalid_argument("crossing box needs n, m >= 0");
  return BoxRegion({0, 0}, n + 1, m + 1);
}

BoxRegion BoxRegion::ball(Site center, std::int32_t radius) {
  if (radius < 0) throw std::invalid_argument("ball radius must be >= 0");
  return BoxRegion({center.x - radius, center.y - radius}, 2 * radius + 1, 2 * radius + 1);
}

BoxRegion BoxRegion::expanded(std::int32_t margin) const {
  if (margin < 0) throw std::invalid_argument("margin must be >= 0");
  return BoxRegion({origin_.x - margin, origin_.y - margin}, width_ + 2 * margin,
                   height_ + 2 * margin);
}

std::vector<Site> boundary(const BoxRegion& region) {
  std::vector<Site> out;
  for (std::int32_t y = region.y_min(); y <= region.y_max(); ++y) {
    for (std::int32_t x = region.x_min(); x <= region.x_max(); ++x) {
      if (x == region.x_min() || x == region.x_max() || y == region.y_min() ||
          y == region.y_max()) {
        out.push_back({x, y});
      }
    }
  }
  return out;
}

SpinField::SpinField(const BoxRegion& region, Spin fill)
    : region_(region), values_(region.size(), fill) {}

Spin SpinField::at(Site s) const {
  if (!region_.contains(s)) throw std::out_of_range("site outside spin field");
  return values_[region_.index_of(s)];
}

void SpinField::set(Site s, Spin v) {
  if (!region_.contains(s)) throw std::out_of_range("site outside spin field");
  values_[region_.index_of(s)] = v;
}

SpinField SpinField::restricted(const BoxRegion& window) const {
  if (!region_.contains(window)) throw std::out_of_range("window exceeds spin field region");
  SpinField out(window);
  for (std::size_t i = 0; i < window.size(); ++i) {
    out.values_[i] = values_[region_.index_of(window.site_at(i))];
  }
  return out;
}

SpinField SpinField::negated() const {
  SpinField out(*this);
  for (auto& v : out.values_) v = -v;
  return out;
}

SpinField SpinField::transposed() const {
  SpinField out(region_.transposed());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const Site s = region_.site_at(i);
    out.values_[out.region_.index_of({s.y, s.x})] = values_[i];
  }
  return out;
}

std::size_t SpinField::count_plus() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](Spin s) { return s.is_plus(); }));
}

bool pointwise_leq(const SpinField& f, const SpinField& g) {
  if (f.region() != g.region()) throw std::invalid_argument("fields on different regions");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] > g[i]) return false;
  }
  return true;
}

}  // namespace spinperc
