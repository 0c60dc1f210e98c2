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

#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "spjoin/axis_model.hpp"
#include "spjoin/partitioner.hpp"
#include "testing_util.hpp"

using namespace spjoin;

namespace {

// Closed rectangle against a half-open tile that is closed on the 1.0 edge.
bool overlaps_tile(const Rect& r, const TileExtent& t) {
    auto axis = [](double lo, double hi, double tl, double tu) {
        const bool below_upper = lo < tu || (tu == 1.0 && lo <= 1.0);
        return below_upper && hi >= tl;
    };
    return axis(r.x_l, r.x_u, t.x_l, t.x_u) && axis(r.y_l, r.y_u, t.y_l, t.y_u);
}

std::vector<PartitionLayout> layouts() {
    return {PartitionLayout::stripes(1), PartitionLayout::grid(1),
            PartitionLayout::stripes(4, Axis::X), PartitionLayout::stripes(13, Axis::Y),
            PartitionLayout::grid(4), PartitionLayout::grid(32)};
}

std::vector<RectId> ids(std::span<const Rect> rs) {
    std::vector<RectId> out;
    for (const Rect& r : rs) out.push_back(r.id);
    return out;
}

}  // namespace

TEST_CASE("tiles_overlapping") {
    CHECK(tiles_overlapping({1, 0.05, 0, 0.25, 1}, PartitionLayout::stripes(10, Axis::X)) ==
          std::vector<std::size_t>{0, 1, 2});
    CHECK(tiles_overlapping({1, 0, 0, 1, 1}, PartitionLayout::grid(2)) ==
          std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(tiles_overlapping({1, 0.1, 0.1, 0.1, 0.1}, PartitionLayout::stripes(10, Axis::X)) ==
          std::vector<std::size_t>{1});
    // x_l on a tile's upper bound is not in that tile
    CHECK(tiles_overlapping({1, 0.5, 0.2, 0.7, 0.3}, PartitionLayout::stripes(2, Axis::X)) ==
          std::vector<std::size_t>{1});
    // the 1.0 edge clamps into the last tile
    CHECK(tiles_overlapping({1, 1.0, 1.0, 1.0, 1.0}, PartitionLayout::grid(3)) ==
          std::vector<std::size_t>{8});
    // horizontal stripes index by y
    CHECK(tiles_overlapping({1, 0.0, 0.45, 1.0, 0.55}, PartitionLayout::stripes(10, Axis::Y)) ==
          std::vector<std::size_t>{4, 5});
}

TEST_CASE("replication matches direct geometric overlap") {
    std::mt19937_64 rng(2);
    const auto rects = testing::mixed_rects(rng, 400);
    for (const auto& layout : layouts()) {
        for (const Rect& r : rects) {
            const auto tiles = tiles_overlapping(r, layout);
            for (std::size_t t = 0; t < layout.tile_count(); ++t) {
                const bool listed = std::binary_search(tiles.begin(), tiles.end(), t);
                REQUIRE(listed == overlaps_tile(r, layout.tile(t)));
            }
        }
    }
}

TEST_CASE("count_pass") {
    const auto layout = PartitionLayout::stripes(10, Axis::X);
    CHECK(count_pass({}, layout).per_tile == std::vector<std::size_t>(10, 0));
    const std::vector<Rect> one{{1, 0.05, 0.0, 0.25, 0.5}};
    const auto c = count_pass(one, layout);
    CHECK(c.per_tile == std::vector<std::size_t>{1, 1, 1, 0, 0, 0, 0, 0, 0, 0});
    CHECK(c.x_extent_sum == doctest::Approx(0.2));
    CHECK(c.y_extent_sum == doctest::Approx(0.5));
}

TEST_CASE("single writer emits the overlap expansion in input order") {
    std::mt19937_64 rng(4);
    const auto rects = testing::mixed_rects(rng, 300);
    const auto layout = PartitionLayout::grid(4);
    const auto parts = partition(rects, layout, 1);
    std::vector<std::vector<RectId>> expected(layout.tile_count());
    for (const Rect& r : rects) {
        for (std::size_t t : tiles_overlapping(r, layout)) expected[t].push_back(r.id);
    }
    for (std::size_t t = 0; t < layout.tile_count(); ++t) CHECK(ids(parts.tile(t)) == expected[t]);
}

TEST_CASE("two-pass partitioning is thread-count invariant") {
    std::mt19937_64 rng(6);
    for (int inst = 0; inst < 5; ++inst) {
        const auto rects = testing::mixed_rects(rng, 1 + rng() % 500);
        for (const auto& layout : layouts()) {
            const auto counted = count_pass(rects, layout).per_tile;
            const auto base = partition(rects, layout, 1);
            std::size_t total = 0;
            for (std::size_t t = 0; t < layout.tile_count(); ++t) total += counted[t];
            CHECK(total >= rects.size());
            for (unsigned m = 1; m <= 8; ++m) {
                const auto parts = partition(rects, layout, m);
                for (std::size_t t = 0; t < layout.tile_count(); ++t) {
                    REQUIRE(parts.count(t) == counted[t]);
                    REQUIRE(ids(parts.tile(t)) == ids(base.tile(t)));
                }
            }
            // union of tile buffers deduplicated by id is the input
            std::set<RectId> seen;
            for (const Rect& r : base.rects) seen.insert(r.id);
            CHECK(seen.size() == rects.size());
        }
    }
}

TEST_CASE("k = 1 keeps every rectangle exactly once") {
    std::mt19937_64 rng(8);
    const auto rects = testing::mixed_rects(rng, 250);
    for (const auto& layout : {PartitionLayout::stripes(1), PartitionLayout::grid(1)}) {
        const auto parts = partition(rects, layout, 3);
        REQUIRE(parts.tile_count() == 1);
        CHECK(parts.count(0) == rects.size());
    }
}

TEST_CASE("all rectangles in one tile") {
    std::vector<Rect> rects;
    for (RectId i = 0; i < 100; ++i) rects.push_back({i, 0.51, 0.51, 0.52, 0.53});
    const auto parts = partition(rects, PartitionLayout::grid(10), 4);
    CHECK(parts.count(5 * 10 + 5) == 100);
    CHECK(parts.rects.size() == 100);
}

TEST_CASE("write_pass refuses to leave its range") {
    const auto layout = PartitionLayout::stripes(2, Axis::X);
    const std::vector<Rect> rects{{1, 0.1, 0, 0.2, 1}, {2, 0.3, 0, 0.4, 1}};
    std::vector<Rect> out(2);
    std::vector<std::size_t> cursors{0, 1};
    std::vector<std::size_t> limits{1, 2};
    CHECK_THROWS_AS(write_pass(rects, layout, cursors, limits, out), PartitionOverflow);
}

TEST_CASE("recommend_k") {
    CHECK(recommend_k(0.01, LayoutKind::Stripes1D) == 10);
    CHECK(recommend_k(0.5, LayoutKind::Stripes1D) == 1);
    CHECK(recommend_k(1e-6, LayoutKind::Stripes1D) == 20000);
    CHECK(recommend_k(0.001, LayoutKind::Grid2D) == 100);
    CHECK(recommend_k(1e-5, LayoutKind::Stripes1D, 5000) == 5000);
    CHECK_THROWS_AS(recommend_k(0.0, LayoutKind::Stripes1D), StatisticsError);
    CHECK_THROWS_AS(recommend_k(-1.0, LayoutKind::Grid2D), StatisticsError);
}
