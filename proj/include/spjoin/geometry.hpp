// Copyright 2026 The spjoin Authors.
//
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

#ifndef SPJOIN_GEOMETRY_HPP
#define SPJOIN_GEOMETRY_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace spjoin {

using RectId = std::uint64_t;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown for inconsistent configuration or statistics.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Axis : std::uint8_t { X, Y };

constexpr Axis other(Axis a) noexcept { return a == Axis::X ? Axis::Y : Axis::X; }

inline const char* to_string(Axis a) noexcept { return a == Axis::X ? "x" : "y"; }

/// Axis-aligned minimum bounding rectangle. Coordinates are closed
/// intervals; zero-extent rectangles model points.
struct Rect {
    RectId id = 0;
    double x_l = 0.0;
    double y_l = 0.0;
    double x_u = 0.0;
    double y_u = 0.0;

    constexpr double lower(Axis a) const noexcept { return a == Axis::X ? x_l : y_l; }
    constexpr double upper(Axis a) const noexcept { return a == Axis::X ? x_u : y_u; }
    constexpr double extent(Axis a) const noexcept { return upper(a) - lower(a); }

    constexpr bool valid() const noexcept { return x_l <= x_u && y_l <= y_u; }

    friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

struct Point {
    RectId id = 0;
    double x = 0.0;
    double y = 0.0;
};

/// A joined (r.id, s.id) pair.
struct IdPair {
    RectId r = 0;
    RectId s = 0;

    friend constexpr auto operator<=>(const IdPair&, const IdPair&) = default;
};

/// Closed-interval overlap on a single axis.
constexpr bool intersects_on(const Rect& r, const Rect& s, Axis a) noexcept {
    return r.lower(a) <= s.upper(a) && s.lower(a) <= r.upper(a);
}

/// True iff r and s share at least one point (touching boundaries count).
constexpr bool intersects(const Rect& r, const Rect& s) noexcept {
    return r.x_l <= s.x_u && s.x_l <= r.x_u && r.y_l <= s.y_u && s.y_l <= r.y_u;
}

/// Uniform division of [0,1] into `k` half-open cells; the last cell is
/// closed at 1.0. Cell bounds and point lookup use the same arithmetic so a
/// coordinate v satisfies lower_bound(cell_of(v)) <= v exactly.
class AxisDivision {
public:
    constexpr AxisDivision() = default;
    explicit AxisDivision(std::uint32_t k) : k_(k) {
        if (k == 0) throw ConfigError("axis division needs at least one cell");
    }

    constexpr std::uint32_t cells() const noexcept { return k_; }

    constexpr double lower_bound(std::uint32_t cell) const noexcept {
        return static_cast<double>(cell) / static_cast<double>(k_);
    }
    constexpr double upper_bound(std::uint32_t cell) const noexcept {
        return lower_bound(cell + 1);
    }

    /// floor(v*k) clamped to [0,k-1], corrected by one step where rounding of
    /// the product disagrees with the cell bounds.
    std::uint32_t cell_of(double v) const noexcept {
        if (!(v > 0.0)) return 0;
        if (v >= 1.0) return k_ - 1;
        auto c = static_cast<std::uint32_t>(v * static_cast<double>(k_));
        if (c >= k_) c = k_ - 1;
        if (c > 0 && v < lower_bound(c)) --c;
        else if (c + 1 < k_ && v >= lower_bound(c + 1)) ++c;
        return c;
    }

private:
    std::uint32_t k_ = 1;
};

/// Spatial extent of one partition. `col` indexes the x division and `row`
/// the y division; stripes leave the unused index at 0.
struct TileExtent {
    double x_l = 0.0;
    double x_u = 1.0;
    double y_l = 0.0;
    double y_u = 1.0;
    std::uint32_t row = 0;
    std::uint32_t col = 0;

    constexpr double lower(Axis a) const noexcept { return a == Axis::X ? x_l : y_l; }
    constexpr double upper(Axis a) const noexcept { return a == Axis::X ? x_u : y_u; }
    constexpr double length(Axis a) const noexcept { return upper(a) - lower(a); }

    /// Half-open containment, closed on sides lying on the domain edge 1.0.
    constexpr bool contains(double px, double py) const noexcept {
        const bool in_x = x_l <= px && (px < x_u || (x_u >= 1.0 && px <= x_u));
        const bool in_y = y_l <= py && (py < y_u || (y_u >= 1.0 && py <= y_u));
        return in_x && in_y;
    }
};

/// Reference-point duplicate test for grid tiles: the pair is reported only
/// by the tile holding the lower-left corner of the intersection region.
/// Requires r and s to intersect and both be assigned to t.
constexpr bool duplicate_test_2d(const Rect& r, const Rect& s, const TileExtent& t) noexcept {
    return std::max(r.x_l, s.x_l) >= t.x_l && std::max(r.y_l, s.y_l) >= t.y_l;
}

/// Single-comparison variant for stripes split along `partition_axis`.
constexpr bool duplicate_test_1d(const Rect& r, const Rect& s, const TileExtent& t,
                                 Axis partition_axis) noexcept {
    return std::max(r.lower(partition_axis), s.lower(partition_axis)) >= t.lower(partition_axis);
}

}  // namespace spjoin

#endif  // SPJOIN_GEOMETRY_HPP
