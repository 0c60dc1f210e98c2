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

#ifndef SPJOIN_AXIS_MODEL_HPP
#define SPJOIN_AXIS_MODEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "spjoin/geometry.hpp"

namespace spjoin {

/// Raised for non-positive or non-finite statistics fed to a tuning rule.
class StatisticsError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Raised when two histograms cannot be combined.
class HistogramError : public Error {
public:
    using Error::Error;
};

inline constexpr std::uint32_t kDefaultSampleStride = 100;
inline constexpr std::uint32_t kMaxHistogramBuckets = 1000;

using Histogram = std::vector<std::uint64_t>;

/// Per-axis projection histograms of a tile's two inputs.
struct AxisHistograms {
    std::uint32_t k_buckets = 1;
    std::uint32_t sample_stride = kDefaultSampleStride;
    Histogram r_x, r_y, s_x, s_y;

    AxisHistograms() = default;
    AxisHistograms(std::uint32_t buckets, std::uint32_t stride);

    const Histogram& r_hist(Axis a) const noexcept { return a == Axis::X ? r_x : r_y; }
    const Histogram& s_hist(Axis a) const noexcept { return a == Axis::X ? s_x : s_y; }

    /// Estimated number of pairs whose projections intersect on `a`.
    std::uint64_t candidates(Axis a) const;

    /// Bucket-wise sum; both sides must share k_buckets.
    AxisHistograms& operator+=(const AxisHistograms& other);
};

/// Samples every `sample_stride`-th rectangle of each tile buffer (positions
/// 0, stride, 2*stride, ...) and counts, per axis, the buckets its projection
/// overlaps after clipping to the tile.
AxisHistograms build_histograms(std::span<const Rect> r_tile, std::span<const Rect> s_tile,
                                const TileExtent& extent, std::uint32_t k_buckets,
                                std::uint32_t sample_stride = kDefaultSampleStride);

/// Dot product of two histograms.
std::uint64_t candidate_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// The axis with fewer estimated candidates; ties go to X.
Axis select_axis(const AxisHistograms& hist);

/// min(1000, max(1, floor(tile_len / avg_rect_len))).
std::uint32_t bucket_count_for_tile(double tile_extent_len, double avg_rect_extent_len);

}  // namespace spjoin

#endif  // SPJOIN_AXIS_MODEL_HPP
