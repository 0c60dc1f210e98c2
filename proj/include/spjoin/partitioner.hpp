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

#ifndef SPJOIN_PARTITIONER_HPP
#define SPJOIN_PARTITIONER_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spjoin/geometry.hpp"

namespace spjoin {

enum class LayoutKind : std::uint8_t { Stripes1D, Grid2D };

inline constexpr std::uint32_t kDefaultMaxPartitions = 20000;

/// Regular decomposition of the unit square: `k` stripes across
/// `partition_axis`, or a k x k grid.
class PartitionLayout {
public:
    PartitionLayout() = default;
    PartitionLayout(LayoutKind kind, std::uint32_t k, Axis partition_axis = Axis::X);

    static PartitionLayout stripes(std::uint32_t k, Axis partition_axis = Axis::X) {
        return {LayoutKind::Stripes1D, k, partition_axis};
    }
    static PartitionLayout grid(std::uint32_t k) { return {LayoutKind::Grid2D, k}; }

    LayoutKind kind() const noexcept { return kind_; }
    Axis partition_axis() const noexcept { return axis_; }
    std::uint32_t k() const noexcept { return division_.cells(); }
    const AxisDivision& division() const noexcept { return division_; }

    std::size_t tile_count() const noexcept {
        const std::size_t k = division_.cells();
        return kind_ == LayoutKind::Grid2D ? k * k : k;
    }

    TileExtent tile(std::size_t index) const;

    /// Inclusive cell range a rectangle overlaps on each axis. For stripes
    /// the non-partitioned range is always [0,0].
    struct CellRange {
        std::uint32_t col_lo = 0, col_hi = 0;
        std::uint32_t row_lo = 0, row_hi = 0;
    };
    CellRange cells_of(const Rect& r) const noexcept;

    std::size_t tile_index(std::uint32_t row, std::uint32_t col) const noexcept {
        return kind_ == LayoutKind::Grid2D ? static_cast<std::size_t>(row) * division_.cells() + col
                                           : (axis_ == Axis::X ? col : row);
    }

    /// Calls `fn(tile_index)` for every tile r overlaps.
    template <class Fn>
    void for_each_tile(const Rect& r, Fn&& fn) const {
        const CellRange c = cells_of(r);
        for (std::uint32_t row = c.row_lo; row <= c.row_hi; ++row) {
            for (std::uint32_t col = c.col_lo; col <= c.col_hi; ++col) fn(tile_index(row, col));
        }
    }

private:
    LayoutKind kind_ = LayoutKind::Stripes1D;
    Axis axis_ = Axis::X;
    AxisDivision division_;
};

/// Tiles whose extent the closed rectangle r overlaps, in increasing order.
std::vector<std::size_t> tiles_overlapping(const Rect& r, const PartitionLayout& layout);

/// Result of the counting pass over one input slice.
struct SliceCounts {
    std::vector<std::size_t> per_tile;
    double x_extent_sum = 0.0;
    double y_extent_sum = 0.0;
};

SliceCounts count_pass(std::span<const Rect> rects, const PartitionLayout& layout);

/// Raised when a writer runs past the range reserved for it.
class PartitionOverflow : public Error {
public:
    using Error::Error;
};

/// Copies every rectangle of `rects` into each tile it overlaps. `cursors[t]`
/// is the next free slot of this writer inside tile t and `limits[t]` the end
/// of its reserved range; cursors are advanced in place.
void write_pass(std::span<const Rect> rects, const PartitionLayout& layout,
                std::span<std::size_t> cursors, std::span<const std::size_t> limits,
                std::span<Rect> out);

/// One input distributed over the tiles of a layout; each tile's rectangles
/// are contiguous in `rects`.
struct PartitionedDataset {
    PartitionLayout layout;
    std::vector<Rect> rects;
    std::vector<std::size_t> offsets;  // tile_count() + 1 entries
    double avg_x_extent = 0.0;
    double avg_y_extent = 0.0;
    std::size_t source_size = 0;

    std::size_t tile_count() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
    std::size_t count(std::size_t t) const noexcept { return offsets[t + 1] - offsets[t]; }
    std::span<const Rect> tile(std::size_t t) const noexcept {
        return {rects.data() + offsets[t], count(t)};
    }
    std::span<Rect> tile(std::size_t t) noexcept { return {rects.data() + offsets[t], count(t)}; }
};

/// Two-pass parallel partitioning: `threads` workers count their slice, the
/// per-tile totals fix each worker's output range, then each worker writes
/// its slice. Buffer order equals input order for any thread count.
PartitionedDataset partition(std::span<const Rect> rects, const PartitionLayout& layout,
                             unsigned threads = 1);

/// Divisions per split axis so that a partition is about ten times the
/// average rectangle extent, clamped to [1, k_max].
std::uint32_t recommend_k(double avg_extent_split_axis, LayoutKind kind,
                          std::uint32_t k_max = kDefaultMaxPartitions);

}  // namespace spjoin

#endif  // SPJOIN_PARTITIONER_HPP
