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

#ifndef SPJOIN_PLANE_SWEEP_HPP
#define SPJOIN_PLANE_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spjoin/geometry.hpp"

namespace spjoin {

enum class SinkMode : std::uint8_t { CountOnly, CollectPairs };

/// Receives join results. In collect mode every pair is stored and
/// count() == pairs().size().
class ResultSink {
public:
    explicit ResultSink(SinkMode mode = SinkMode::CountOnly) : mode_(mode) {}

    void add(RectId r, RectId s) {
        ++count_;
        if (mode_ == SinkMode::CollectPairs) pairs_.push_back({r, s});
    }

    SinkMode mode() const noexcept { return mode_; }
    std::uint64_t count() const noexcept { return count_; }
    const std::vector<IdPair>& pairs() const noexcept { return pairs_; }
    std::vector<IdPair> take_pairs() noexcept { return std::move(pairs_); }

private:
    SinkMode mode_;
    std::uint64_t count_ = 0;
    std::vector<IdPair> pairs_;
};

/// Duplicate filter bound to the partition a sweep runs on.
struct DuplicateFilter {
    enum class Kind : std::uint8_t { Grid, Stripes };

    Kind kind = Kind::Grid;
    TileExtent tile;
    Axis partition_axis = Axis::X;  // stripes only

    bool accepts(const Rect& r, const Rect& s) const noexcept {
        return kind == Kind::Grid ? duplicate_test_2d(r, s, tile)
                                  : duplicate_test_1d(r, s, tile, partition_axis);
    }
};

/// Sorts by lower endpoint on `axis`; ties keep no particular order.
void sort_by_lower(std::span<Rect> rects, Axis axis);

/// Forward-scan plane sweep over inputs already sorted by lower endpoint on
/// `sweep_axis`. Every intersecting pair accepted by `filter` reaches the
/// sink exactly once.
void forward_scan_join(std::span<const Rect> r_set, std::span<const Rect> s_set, Axis sweep_axis,
                       const std::optional<DuplicateFilter>& filter, ResultSink& sink);

enum class SweepPolicy : std::uint8_t { ForcedX, ForcedY, Adaptive };

/// Copies and sorts both inputs, then sweeps along the axis picked by
/// `policy`. Adaptive consults the histogram model over the whole domain.
/// Returns the axis used.
Axis choose_and_sweep(std::span<const Rect> r_set, std::span<const Rect> s_set, SweepPolicy policy,
                      ResultSink& sink);

namespace detail {

// Algorithm core. `emit(r, s)` is called for every pair whose projections
// intersect on both axes. Equal lower endpoints advance the S cursor.
template <Axis SweepAxis, class Emit>
void forward_scan(std::span<const Rect> r_set, std::span<const Rect> s_set, Emit&& emit) {
    constexpr Axis check_axis = other(SweepAxis);
    const std::size_t nr = r_set.size();
    const std::size_t ns = s_set.size();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < nr && j < ns) {
        const Rect& r = r_set[i];
        const Rect& s = s_set[j];
        if (r.lower(SweepAxis) < s.lower(SweepAxis)) {
            const double bound = r.upper(SweepAxis);
            for (std::size_t k = j; k < ns && s_set[k].lower(SweepAxis) <= bound; ++k) {
                if (intersects_on(r, s_set[k], check_axis)) emit(r, s_set[k]);
            }
            ++i;
        } else {
            const double bound = s.upper(SweepAxis);
            for (std::size_t k = i; k < nr && r_set[k].lower(SweepAxis) <= bound; ++k) {
                if (intersects_on(r_set[k], s, check_axis)) emit(r_set[k], s);
            }
            ++j;
        }
    }
}

template <class Emit>
void forward_scan(std::span<const Rect> r_set, std::span<const Rect> s_set, Axis sweep_axis,
                  Emit&& emit) {
    if (sweep_axis == Axis::X) {
        forward_scan<Axis::X>(r_set, s_set, std::forward<Emit>(emit));
    } else {
        forward_scan<Axis::Y>(r_set, s_set, std::forward<Emit>(emit));
    }
}

}  // namespace detail

}  // namespace spjoin

#endif  // SPJOIN_PLANE_SWEEP_HPP
