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

#include <array>
#include <cstddef>
#include <cstdint>
#include <compare>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <vector>

namespace spinperc {

/// A point of the square lattice Z^2.
struct Site {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr auto operator<=>(const Site&, const Site&) = default;
  constexpr Site operator+(Site o) const noexcept { return {x + o.x, y + o.y}; }
  constexpr Site operator-(Site o) const noexcept { return {x - o.x, y - o.y}; }
};

constexpr std::int64_t l1_distance(Site a, Site b) noexcept {
  const std::int64_t dx = std::int64_t{a.x} - b.x;
  const std::int64_t dy = std::int64_t{a.y} - b.y;
  return (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy);
}

constexpr std::int64_t linf_distance(Site a, Site b) noexcept {
  std::int64_t dx = std::int64_t{a.x} - b.x;
  std::int64_t dy = std::int64_t{a.y} - b.y;
  dx = dx < 0 ? -dx : dx;
  dy = dy < 0 ? -dy : dy;
  return dx > dy ? dx : dy;
}

/// Unit steps in the fixed (E, N, W, S) order.
inline constexpr std::array<Site, 4> kSteps4{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

/// Unit steps of the *-adjacency, counter-clockwise starting east.
inline constexpr std::array<Site, 8> kSteps8{
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

std::array<Site, 4> neighbors4(Site s) noexcept;
std::array<Site, 8> neighbors8(Site s) noexcept;

/// Axis-aligned box of sites [origin.x, origin.x + width) x [origin.y, origin.y + height).
///
/// Sites are indexed row-major with y as the row: index = (y - y0) * width + (x - x0).
class BoxRegion {
 public:
  BoxRegion() = default;
  BoxRegion(Site origin, std::int32_t width, std::int32_t height);

  /// The inclusive crossing box [0,n] x [0,m], i.e. (n+1) x (m+1) sites.
  static BoxRegion crossing_box(std::int32_t n, std::int32_t m);
  /// The l-infinity ball B(center, radius).
  static BoxRegion ball(Site center, std::int32_t radius);

  Site origin() const noexcept { return origin_; }
  std::int32_t width() const noexcept { return width_; }
  std::int32_t height() const noexcept { return height_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::int32_t x_min() const noexcept { return origin_.x; }
  std::int32_t y_min() const noexcept { return origin_.y; }
  std::int32_t x_max() const noexcept { return origin_.x + width_ - 1; }
  std::int32_t y_max() const noexcept { return origin_.y + height_ - 1; }

  bool contains(Site s) const noexcept {
    return s.x >= origin_.x && s.y >= origin_.y && s.x - origin_.x < width_ &&
           s.y - origin_.y < height_;
  }
  bool contains(const BoxRegion& other) const noexcept {
    return other.x_min() >= x_min() && other.y_min() >= y_min() &&
           other.x_max() <= x_max() && other.y_max() <= y_max();
  }

  std::size_t index_of(Site s) const noexcept {
    return static_cast<std::size_t>(s.y - origin_.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(s.x - origin_.x);
  }
  std::size_t index_of_checked(Site s) const {
    if (!contains(s)) throw std::out_of_range("site outside region");
    return index_of(s);
  }
  Site site_at(std::size_t index) const noexcept {
    const auto w = static_cast<std::size_t>(width_);
    return {origin_.x + static_cast<std::int32_t>(index % w),
            origin_.y + static_cast<std::int32_t>(index / w)};
  }

  /// The box grown by `margin` sites on every side.
  BoxRegion expanded(std::int32_t margin) const;
  /// Same extent with x and y exchanged (the reflection in the diagonal).
  BoxRegion transposed() const { return BoxRegion({origin_.y, origin_.x}, height_, width_); }

  friend bool operator==(const BoxRegion&, const BoxRegion&) = default;

 private:
  Site origin_{};
  std::int32_t width_ = 1;
  std::int32_t height_ = 1;
};

/// Internal boundary: sites of the region with a 4-neighbor outside it, in row-major order.
std::vector<Site> boundary(const BoxRegion& region);

/// A spin value in {-1, +1}.
class Spin {
 public:
  constexpr Spin() = default;
  static constexpr Spin plus() noexcept { return Spin(1); }
  static constexpr Spin minus() noexcept { return Spin(-1); }
  static Spin from_int(int v) {
    if (v != 1 && v != -1) throw std::invalid_argument("spin value must be -1 or +1");
    return Spin(static_cast<std::int8_t>(v));
  }

  constexpr int value() const noexcept { return value_; }
  constexpr bool is_plus() const noexcept { return value_ > 0; }
  constexpr Spin operator-() const noexcept { return Spin(static_cast<std::int8_t>(-value_)); }

  friend constexpr auto operator<=>(const Spin&, const Spin&) = default;

 private:
  constexpr explicit Spin(std::int8_t v) : value_(v) {}
  std::int8_t value_ = -1;
};

/// Dense row-major field of spins over a box.
class SpinField {
 public:
  SpinField() = default;
  explicit SpinField(const BoxRegion& region, Spin fill = Spin::minus());

  const BoxRegion& region() const noexcept { return region_; }
  std::size_t size() const noexcept { return values_.size(); }

  Spin at(Site s) const;
  void set(Site s, Spin v);
  Spin operator[](std::size_t index) const noexcept { return values_[index]; }
  Spin& operator[](std::size_t index) noexcept { return values_[index]; }
  std::span<const Spin> values() const noexcept { return values_; }

  /// The field restricted to a sub-box.
  SpinField restricted(const BoxRegion& window) const;
  /// Pointwise negation.
  SpinField negated() const;
  /// The field reflected in the diagonal (x <-> y).
  SpinField transposed() const;
  std::size_t count_plus() const noexcept;

  friend bool operator==(const SpinField&, const SpinField&) = default;

 private:
  BoxRegion region_{};
  std::vector<Spin> values_;
};

/// Pointwise order F <= G on a common region.
bool pointwise_leq(const SpinField& f, const SpinField& g);

}  // namespace spinperc
