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

#include <random>

#include "doctest.h"
#include "spjoin/axis_model.hpp"

using namespace spjoin;

namespace {

// Recount oracle: bucket b of [lo, hi) covers [lo + b*w, lo + (b+1)*w); a
// projection is counted in every bucket it overlaps after clipping.
Histogram recount(const std::vector<Rect>& rects, Axis a, double lo, double hi, std::uint32_t k) {
    Histogram h(k, 0);
    const double w = (hi - lo) / k;
    for (const Rect& r : rects) {
        const double p = std::max(r.lower(a), lo);
        const double q = std::min(r.upper(a), hi);
        if (p > q) continue;
        for (std::uint32_t b = 0; b < k; ++b) {
            const double b_lo = lo + b * w;
            const double b_hi = b + 1 == k ? hi : lo + (b + 1) * w;
            const bool below = b + 1 == k ? p <= b_hi : p < b_hi;
            if (below && q >= b_lo) ++h[b];
        }
    }
    return h;
}

std::uint64_t dot(const Histogram& a, const Histogram& b) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<Rect> shaped(std::mt19937_64& rng, std::size_t n, double ex, double ey, RectId first) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Rect> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = unit(rng) * (1 - ex);
        const double y = unit(rng) * (1 - ey);
        out.push_back({first + i, x, y, x + ex * (0.5 + unit(rng)), y + ey * (0.5 + unit(rng))});
    }
    return out;
}

}  // namespace

TEST_CASE("a rectangle spanning the tile fills every bucket") {
    const TileExtent tile{0.2, 0.4, 0.6, 0.8};
    const std::vector<Rect> r{{1, 0.1, 0.5, 0.5, 0.9}};
    const auto h = build_histograms(r, {}, tile, 8, 1);
    CHECK(h.r_x == Histogram(8, 1));
    CHECK(h.r_y == Histogram(8, 1));
    CHECK(h.s_x == Histogram(8, 0));
}

TEST_CASE("empty inputs give zero candidates") {
    const std::vector<Rect> s{{1, 0.1, 0.1, 0.2, 0.2}};
    const auto h = build_histograms({}, s, TileExtent{}, 100, 1);
    CHECK(h.candidates(Axis::X) == 0);
    CHECK(h.candidates(Axis::Y) == 0);
}

TEST_CASE("histograms match a direct per-bucket recount") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const TileExtent tile{0.25, 0.5, 0.1, 0.35};
    for (int inst = 0; inst < 10; ++inst) {
        std::vector<Rect> r, s;
        for (RectId i = 0; i < 200; ++i) {
            const double x = 0.2 + 0.35 * unit(rng), y = 0.05 + 0.35 * unit(rng);
            (i % 2 ? r : s).push_back({i, x, y, x + 0.05 * unit(rng), y + 0.02 * unit(rng)});
        }
        for (std::uint32_t k : {1u, 7u, 50u}) {
            const auto h = build_histograms(r, s, tile, k, 1);
            REQUIRE(h.r_x == recount(r, Axis::X, tile.x_l, tile.x_u, k));
            REQUIRE(h.r_y == recount(r, Axis::Y, tile.y_l, tile.y_u, k));
            REQUIRE(h.s_x == recount(s, Axis::X, tile.x_l, tile.x_u, k));
            REQUIRE(h.s_y == recount(s, Axis::Y, tile.y_l, tile.y_u, k));
            REQUIRE(h.candidates(Axis::X) == dot(h.r_x, h.s_x));
        }
    }
}

TEST_CASE("sampling takes positions 0, stride, 2*stride, ...") {
    std::vector<Rect> r;
    for (RectId i = 0; i < 10; ++i) r.push_back({i, 0.05 + 0.1 * i, 0.5, 0.05 + 0.1 * i, 0.5});
    const auto h = build_histograms(r, {}, TileExtent{}, 10, 3);
    // positions 0, 3, 6, 9
    CHECK(h.r_x == Histogram{1, 0, 0, 1, 0, 0, 1, 0, 0, 1});
    CHECK(h.r_y[5] == 4);
}

TEST_CASE("candidate_count") {
    CHECK(candidate_count(Histogram{0, 0}, Histogram{0, 0}) == 0);
    CHECK(candidate_count(Histogram{1, 2}, Histogram{3, 4}) == 11);
    CHECK_THROWS_AS(candidate_count(Histogram{1}, Histogram{1, 2}), HistogramError);
}

TEST_CASE("select_axis") {
    std::mt19937_64 rng(12);
    SUBCASE("ties go to x") {
        AxisHistograms h(4, 1);
        h.r_x = h.r_y = h.s_x = h.s_y = Histogram{1, 2, 3, 4};
        CHECK(select_axis(h) == Axis::X);
    }
    SUBCASE("wide flat rectangles sweep along y") {
        const auto r = shaped(rng, 3000, 0.01, 0.001, 0);
        const auto s = shaped(rng, 3000, 0.01, 0.001, 5000);
        const std::uint32_t k = 200;
        const auto ix = dot(recount(r, Axis::X, 0, 1, k), recount(s, Axis::X, 0, 1, k));
        const auto iy = dot(recount(r, Axis::Y, 0, 1, k), recount(s, Axis::Y, 0, 1, k));
        REQUIRE(iy < ix);
        const auto h = build_histograms(r, s, TileExtent{}, k, 1);
        CHECK(h.candidates(Axis::X) == ix);
        CHECK(h.candidates(Axis::Y) == iy);
        CHECK(select_axis(h) == Axis::Y);
        CHECK(select_axis(build_histograms(r, s, TileExtent{}, k, 100)) == Axis::Y);
    }
    SUBCASE("tall thin rectangles sweep along x") {
        const auto r = shaped(rng, 3000, 0.001, 0.01, 0);
        const auto s = shaped(rng, 3000, 0.001, 0.01, 5000);
        const std::uint32_t k = 200;
        const auto ix = dot(recount(r, Axis::X, 0, 1, k), recount(s, Axis::X, 0, 1, k));
        const auto iy = dot(recount(r, Axis::Y, 0, 1, k), recount(s, Axis::Y, 0, 1, k));
        REQUIRE(ix < iy);
        CHECK(select_axis(build_histograms(r, s, TileExtent{}, k, 1)) == Axis::X);
    }
}

TEST_CASE("axis model invariants") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int inst = 0; inst < 20; ++inst) {
        const auto r = shaped(rng, 200, 0.05 * unit(rng), 0.05 * unit(rng), 0);
        const auto s = shaped(rng, 300, 0.05 * unit(rng), 0.05 * unit(rng), 1000);
        const auto h = build_histograms(r, s, TileExtent{}, 50, 1);
        // swapping the inputs
        CHECK(select_axis(build_histograms(s, r, TileExtent{}, 50, 1)) == select_axis(h));
        // one bucket
        const auto one = build_histograms(r, s, TileExtent{}, 1, 1);
        CHECK(one.candidates(Axis::X) == r.size() * s.size());
        CHECK(one.candidates(Axis::Y) == r.size() * s.size());
        CHECK(select_axis(one) == Axis::X);
        // doubling both samples scales by four
        auto r2 = r;
        r2.insert(r2.end(), r.begin(), r.end());
        auto s2 = s;
        s2.insert(s2.end(), s.begin(), s.end());
        const auto h2 = build_histograms(r2, s2, TileExtent{}, 50, 1);
        CHECK(h2.candidates(Axis::X) == 4 * h.candidates(Axis::X));
        CHECK(h2.candidates(Axis::Y) == 4 * h.candidates(Axis::Y));
        CHECK(select_axis(h2) == select_axis(h));
    }
}

TEST_CASE("merging partial histograms") {
    std::mt19937_64 rng(14);
    const auto r = shaped(rng, 300, 0.02, 0.03, 0);
    const auto s = shaped(rng, 300, 0.03, 0.02, 1000);
    const auto whole = build_histograms(r, s, TileExtent{}, 40, 1);
    auto a = build_histograms(std::span(r).first(100), std::span(s).first(250), TileExtent{}, 40, 1);
    a += build_histograms(std::span(r).subspan(100), std::span(s).subspan(250), TileExtent{}, 40, 1);
    CHECK(a.r_x == whole.r_x);
    CHECK(a.s_y == whole.s_y);
    AxisHistograms other(41, 1);
    CHECK_THROWS_AS(a += other, HistogramError);
}

TEST_CASE("bucket_count_for_tile") {
    CHECK(bucket_count_for_tile(1.0, 1e-5) == 1000);
    CHECK(bucket_count_for_tile(0.001, 0.0005) == 2);
    CHECK(bucket_count_for_tile(0.001, 0.01) == 1);
    CHECK_THROWS_AS(bucket_count_for_tile(0.0, 0.1), StatisticsError);
    CHECK_THROWS_AS(bucket_count_for_tile(1.0, -0.1), StatisticsError);
}
