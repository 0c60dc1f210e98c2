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

#include "spjoin/plane_sweep.hpp"

#include <algorithm>

#include "spjoin/axis_model.hpp"

namespace spjoin {

void sort_by_lower(std::span<Rect> rects, Axis axis) {
    if (axis == Axis::X) {
        std::sort(rects.begin(), rects.end(),
                  [](const Rect& a, const Rect& b) { return a.x_l < b.x_l; });
    } else {
        std::sort(rects.begin(), rects.end(),
                  [](const Rect& a, const Rect& b) { return a.y_l < b.y_l; });
    }
}

void forward_scan_join(std::span<const Rect> r_set, std::span<const Rect> s_set, Axis sweep_axis,
                       const std::optional<DuplicateFilter>& filter, ResultSink& sink) {
    if (!filter) {
        detail::forward_scan(r_set, s_set, sweep_axis,
                             [&](const Rect& r, const Rect& s) { sink.add(r.id, s.id); });
        return;
    }
    const DuplicateFilter f = *filter;
    if (f.kind == DuplicateFilter::Kind::Grid) {
        detail::forward_scan(r_set, s_set, sweep_axis, [&](const Rect& r, const Rect& s) {
            if (duplicate_test_2d(r, s, f.tile)) sink.add(r.id, s.id);
        });
    } else {
        detail::forward_scan(r_set, s_set, sweep_axis, [&](const Rect& r, const Rect& s) {
            if (duplicate_test_1d(r, s, f.tile, f.partition_axis)) sink.add(r.id, s.id);
        });
    }
}

Axis choose_and_sweep(std::span<const Rect> r_set, std::span<const Rect> s_set, SweepPolicy policy,
                      ResultSink& sink) {
    Axis axis = Axis::X;
    switch (policy) {
        case SweepPolicy::ForcedX: axis = Axis::X; break;
        case SweepPolicy::ForcedY: axis = Axis::Y; break;
        case SweepPolicy::Adaptive: {
            double sum = 0.0;
            for (const Rect& r : r_set) sum += r.extent(Axis::X) + r.extent(Axis::Y);
            for (const Rect& s : s_set) sum += s.extent(Axis::X) + s.extent(Axis::Y);
            const std::size_t n = r_set.size() + s_set.size();
            const double avg = n > 0 ? sum / (2.0 * static_cast<double>(n)) : 0.0;
            const std::uint32_t buckets =
                avg > 0.0 ? bucket_count_for_tile(1.0, avg) : kMaxHistogramBuckets;
            axis = select_axis(build_histograms(r_set, s_set, TileExtent{}, buckets));
            break;
        }
    }
    std::vector<Rect> r_sorted(r_set.begin(), r_set.end());
    std::vector<Rect> s_sorted(s_set.begin(), s_set.end());
    sort_by_lower(r_sorted, axis);
    sort_by_lower(s_sorted, axis);
    forward_scan_join(r_sorted, s_sorted, axis, std::nullopt, sink);
    return axis;
}

}  // namespace spjoin
