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

#include "spjoin/axis_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spjoin {

namespace {

// Bucket index of v within [lo, hi) split into k buckets, clamped.
std::uint32_t bucket_of(double v, double lo, double hi, std::uint32_t k) {
    const double t = (v - lo) / (hi - lo) * static_cast<double>(k);
    if (!(t > 0.0)) return 0;
    if (t >= static_cast<double>(k)) return k - 1;
    return static_cast<std::uint32_t>(t);
}

void accumulate(std::span<const Rect> rects, const TileExtent& extent, std::uint32_t k,
                std::uint32_t stride, Histogram& hx, Histogram& hy) {
    for (std::size_t i = 0; i < rects.size(); i += stride) {
        const Rect& r = rects[i];
        for (Axis a : {Axis::X, Axis::Y}) {
            const double lo = std::max(r.lower(a), extent.lower(a));
            const double hi = std::min(r.upper(a), extent.upper(a));
            if (lo > hi) continue;
            Histogram& h = a == Axis::X ? hx : hy;
            const std::uint32_t first = bucket_of(lo, extent.lower(a), extent.upper(a), k);
            const std::uint32_t last = bucket_of(hi, extent.lower(a), extent.upper(a), k);
            for (std::uint32_t b = first; b <= last; ++b) ++h[b];
        }
    }
}

}  // namespace

AxisHistograms::AxisHistograms(std::uint32_t buckets, std::uint32_t stride)
    : k_buckets(buckets),
      sample_stride(stride),
      r_x(buckets, 0),
      r_y(buckets, 0),
      s_x(buckets, 0),
      s_y(buckets, 0) {}

std::uint64_t AxisHistograms::candidates(Axis a) const {
    return candidate_count(r_hist(a), s_hist(a));
}

AxisHistograms& AxisHistograms::operator+=(const AxisHistograms& other) {
    if (other.k_buckets != k_buckets) {
        throw HistogramError("cannot merge histograms with " + std::to_string(k_buckets) +
                             " and " + std::to_string(other.k_buckets) + " buckets");
    }
    auto add = [](Histogram& into, const Histogram& from) {
        for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
    };
    add(r_x, other.r_x);
    add(r_y, other.r_y);
    add(s_x, other.s_x);
    add(s_y, other.s_y);
    return *this;
}

AxisHistograms build_histograms(std::span<const Rect> r_tile, std::span<const Rect> s_tile,
                                const TileExtent& extent, std::uint32_t k_buckets,
                                std::uint32_t sample_stride) {
    if (k_buckets == 0) throw ConfigError("histograms need at least one bucket");
    if (sample_stride == 0) throw ConfigError("sample stride must be positive");
    AxisHistograms h(k_buckets, sample_stride);
    accumulate(r_tile, extent, k_buckets, sample_stride, h.r_x, h.r_y);
    accumulate(s_tile, extent, k_buckets, sample_stride, h.s_x, h.s_y);
    return h;
}

std::uint64_t candidate_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    if (a.size() != b.size()) {
        throw HistogramError("histogram length mismatch: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    }
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
    return total;
}

Axis select_axis(const AxisHistograms& hist) {
    return hist.candidates(Axis::X) <= hist.candidates(Axis::Y) ? Axis::X : Axis::Y;
}

std::uint32_t bucket_count_for_tile(double tile_extent_len, double avg_rect_extent_len) {
    if (!(tile_extent_len > 0.0) || !(avg_rect_extent_len > 0.0) ||
        !std::isfinite(tile_extent_len) || !std::isfinite(avg_rect_extent_len)) {
        throw StatisticsError("bucket count needs positive tile and rectangle extents");
    }
    const double ratio = std::floor(tile_extent_len / avg_rect_extent_len);
    if (ratio >= static_cast<double>(kMaxHistogramBuckets)) return kMaxHistogramBuckets;
    return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(ratio));
}

}  // namespace spjoin
