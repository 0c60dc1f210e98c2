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

#include "spjoin/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spjoin/axis_model.hpp"
#include "spjoin/parallel.hpp"

namespace spjoin {

PartitionLayout::PartitionLayout(LayoutKind kind, std::uint32_t k, Axis partition_axis)
    : kind_(kind), axis_(partition_axis), division_(k) {}

TileExtent PartitionLayout::tile(std::size_t index) const {
    const std::uint32_t k = division_.cells();
    TileExtent t;
    if (kind_ == LayoutKind::Grid2D) {
        t.row = static_cast<std::uint32_t>(index / k);
        t.col = static_cast<std::uint32_t>(index % k);
    } else if (axis_ == Axis::X) {
        t.col = static_cast<std::uint32_t>(index);
    } else {
        t.row = static_cast<std::uint32_t>(index);
    }
    const bool split_x = kind_ == LayoutKind::Grid2D || axis_ == Axis::X;
    const bool split_y = kind_ == LayoutKind::Grid2D || axis_ == Axis::Y;
    if (split_x) {
        t.x_l = division_.lower_bound(t.col);
        t.x_u = division_.upper_bound(t.col);
    }
    if (split_y) {
        t.y_l = division_.lower_bound(t.row);
        t.y_u = division_.upper_bound(t.row);
    }
    return t;
}

PartitionLayout::CellRange PartitionLayout::cells_of(const Rect& r) const noexcept {
    CellRange c;
    const bool split_x = kind_ == LayoutKind::Grid2D || axis_ == Axis::X;
    const bool split_y = kind_ == LayoutKind::Grid2D || axis_ == Axis::Y;
    if (split_x) {
        c.col_lo = division_.cell_of(r.x_l);
        c.col_hi = division_.cell_of(r.x_u);
    }
    if (split_y) {
        c.row_lo = division_.cell_of(r.y_l);
        c.row_hi = division_.cell_of(r.y_u);
    }
    return c;
}

std::vector<std::size_t> tiles_overlapping(const Rect& r, const PartitionLayout& layout) {
    std::vector<std::size_t> out;
    layout.for_each_tile(r, [&](std::size_t t) { out.push_back(t); });
    std::sort(out.begin(), out.end());
    return out;
}

SliceCounts count_pass(std::span<const Rect> rects, const PartitionLayout& layout) {
    SliceCounts c;
    c.per_tile.assign(layout.tile_count(), 0);
    for (const Rect& r : rects) {
        layout.for_each_tile(r, [&](std::size_t t) { ++c.per_tile[t]; });
        c.x_extent_sum += r.x_u - r.x_l;
        c.y_extent_sum += r.y_u - r.y_l;
    }
    return c;
}

void write_pass(std::span<const Rect> rects, const PartitionLayout& layout,
                std::span<std::size_t> cursors, std::span<const std::size_t> limits,
                std::span<Rect> out) {
    for (const Rect& r : rects) {
        layout.for_each_tile(r, [&](std::size_t t) {
            std::size_t& pos = cursors[t];
            if (pos >= limits[t] || pos >= out.size()) {
                throw PartitionOverflow("write pass overflowed the range of tile " +
                                        std::to_string(t));
            }
            out[pos++] = r;
        });
    }
}

PartitionedDataset partition(std::span<const Rect> rects, const PartitionLayout& layout,
                             unsigned threads) {
    const unsigned m = std::max(1u, threads);
    const std::size_t tiles = layout.tile_count();

    std::vector<SliceCounts> counts(m);
    run_workers(m, [&](unsigned w) {
        const Slice sl = slice_of(rects.size(), w, m);
        counts[w] = count_pass(rects.subspan(sl.begin, sl.end - sl.begin), layout);
    });

    PartitionedDataset out;
    out.layout = layout;
    out.source_size = rects.size();
    out.offsets.assign(tiles + 1, 0);
    double sum_x = 0.0;
    double sum_y = 0.0;
    for (const SliceCounts& c : counts) {
        for (std::size_t t = 0; t < tiles; ++t) out.offsets[t + 1] += c.per_tile[t];
        sum_x += c.x_extent_sum;
        sum_y += c.y_extent_sum;
    }
    for (std::size_t t = 0; t < tiles; ++t) out.offsets[t + 1] += out.offsets[t];
    if (!rects.empty()) {
        out.avg_x_extent = sum_x / static_cast<double>(rects.size());
        out.avg_y_extent = sum_y / static_cast<double>(rects.size());
    }
    out.rects.resize(out.offsets[tiles]);

    // Worker w writes tile t at offsets[t] + sum of earlier workers' counts.
    std::vector<std::vector<std::size_t>> cursors(m);
    std::vector<std::vector<std::size_t>> limits(m);
    {
        std::vector<std::size_t> running(out.offsets.begin(), out.offsets.end() - 1);
        for (unsigned w = 0; w < m; ++w) {
            cursors[w] = running;
            for (std::size_t t = 0; t < tiles; ++t) running[t] += counts[w].per_tile[t];
            limits[w] = running;
        }
    }
    run_workers(m, [&](unsigned w) {
        const Slice sl = slice_of(rects.size(), w, m);
        write_pass(rects.subspan(sl.begin, sl.end - sl.begin), layout, cursors[w], limits[w],
                   out.rects);
    });
    return out;
}

std::uint32_t recommend_k(double avg_extent_split_axis, LayoutKind /*kind*/, std::uint32_t k_max) {
    if (!(avg_extent_split_axis > 0.0) || !std::isfinite(avg_extent_split_axis)) {
        throw StatisticsError("recommend_k needs a positive average extent, got " +
                              std::to_string(avg_extent_split_axis));
    }
    if (k_max == 0) throw ConfigError("k_max must be positive");
    const double k = std::round(1.0 / (10.0 * avg_extent_split_axis));
    if (!(k < static_cast<double>(k_max))) return k_max;
    return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(k));
}

}  // namespace spjoin
