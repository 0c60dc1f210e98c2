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

#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "spjoin/dataset_io.hpp"
#include "spjoin/oracle.hpp"
#include "testing_util.hpp"

using namespace spjoin;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& contents) {
    const fs::path p = fs::temp_directory_path() / ("spjoin_test_" + name);
    std::ofstream(p, std::ios::binary) << contents;
    return p;
}

}  // namespace

TEST_CASE("load_mbr_csv") {
    SUBCASE("single record") {
        const auto d = load_mbr_csv(write_temp("one.csv", "7,0.1,0.2,0.3,0.4\n"));
        REQUIRE(d.rects.size() == 1);
        CHECK(d.rects[0] == Rect{7, 0.1, 0.2, 0.3, 0.4});
        CHECK(d.stats.cardinality == 1);
        CHECK(d.stats.avg_x_extent == doctest::Approx(0.2));
        CHECK(d.stats.avg_y_extent == doctest::Approx(0.2));
    }
    SUBCASE("empty file") {
        const auto d = load_mbr_csv(write_temp("empty.csv", ""));
        CHECK(d.rects.empty());
        CHECK(d.stats.cardinality == 0);
        CHECK(d.stats.avg_x_extent == 0.0);
    }
    SUBCASE("header and CRLF") {
        const auto d = load_mbr_csv(
            write_temp("hdr.csv", "id,x_l,y_l,x_u,y_u\r\n1, 0,0,1,1\r\n\r\n2,2,2,3,4\r\n"));
        REQUIRE(d.rects.size() == 2);
        CHECK(d.rects[1].y_u == 4.0);
        // raw frame [0,3]x[0,4]
        CHECK(d.stats.avg_x_extent == doctest::Approx((1.0 / 3 + 1.0 / 3) / 2));
        CHECK(d.stats.avg_y_extent == doctest::Approx((0.25 + 0.5) / 2));
        CHECK(d.stats.raw_bbox.x_u == 3.0);
    }
    SUBCASE("malformed line names its line") {
        try {
            load_mbr_csv(write_temp("bad.csv", "a,b,c\n"));
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
            CHECK(std::string(e.what()).find(":1:") != std::string::npos);
        }
        try {
            load_mbr_csv(write_temp("bad2.csv", "1,0,0,1,1\n2,0,0,x,1\n"));
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("inverted corners reject the file") {
        CHECK_THROWS_AS(load_mbr_csv(write_temp("inv.csv", "1,0.5,0,0.4,1\n")), ParseError);
    }
    CHECK_THROWS_AS(load_mbr_csv("/nonexistent/spjoin.csv"), Error);
}

TEST_CASE("binary format") {
    std::mt19937_64 rng(1);
    const auto rects = testing::mixed_rects(rng, 100);
    const fs::path p = fs::temp_directory_path() / "spjoin_test_rects.sjb";
    save_mbr_binary(p, rects);
    CHECK(fs::file_size(p) == 12 + 40 * rects.size());
    const auto d = load_dataset(p);
    CHECK(d.rects == rects);

    // exact layout of one record
    const std::vector<Rect> one{{0x0102030405060708ull, 0.0, 0.25, 0.5, 1.0}};
    save_mbr_binary(p, one);
    std::ifstream in(p, std::ios::binary);
    std::string blob((std::istreambuf_iterator<char>(in)), {});
    REQUIRE(blob.size() == 52);
    CHECK(blob.substr(0, 4) == "SJB1");
    CHECK(static_cast<unsigned char>(blob[4]) == 1);
    CHECK(static_cast<unsigned char>(blob[12]) == 0x08);
    CHECK(static_cast<unsigned char>(blob[19]) == 0x01);

    const auto truncated = write_temp("trunc.sjb", blob.substr(0, 40));
    CHECK_THROWS_AS(load_dataset(truncated), ParseError);

    const fs::path csv = fs::temp_directory_path() / "spjoin_test_rects.csv";
    save_mbr_csv(csv, rects);
    CHECK(load_dataset(csv).rects == rects);
}

TEST_CASE("normalize") {
    const std::vector<Rect> r{{1, 2, 5, 4, 5}};
    BoundingBox frame{0, 0, 10, 10, false};
    const auto n = normalize(r, frame);
    CHECK(n[0].x_l == doctest::Approx(0.2));
    CHECK(n[0].x_u == doctest::Approx(0.4));
    CHECK(n[0].y_l == doctest::Approx(0.5));
    CHECK(n[0].y_u == doctest::Approx(0.5));

    const std::vector<Rect> unit{{1, 0.1, 0.2, 0.3, 0.4}};
    CHECK(normalize(unit, BoundingBox::unit()) == unit);
    CHECK(normalization_frame(BoundingBox::of(unit)).x_u == 1.0);

    const std::vector<Rect> flat{{1, 0, 3, 5, 3}, {2, 1, 3, 2, 3}};
    CHECK_THROWS_AS(normalize(flat), NormalizationError);
}

TEST_CASE("normalization preserves intersection") {
    std::mt19937_64 rng(2);
    auto scale = [](std::vector<Rect> v, double sx, double ox, double sy, double oy) {
        for (Rect& r : v) {
            r.x_l = r.x_l * sx + ox;
            r.x_u = r.x_u * sx + ox;
            r.y_l = r.y_l * sy + oy;
            r.y_u = r.y_u * sy + oy;
        }
        return v;
    };
    const auto a = testing::mixed_rects(rng, 200);
    const auto b = testing::mixed_rects(rng, 200, 1000);
    const auto raw_a = scale(a, 360.0, -180.0, 170.0, -85.0);
    const auto raw_b = scale(b, 360.0, -180.0, 170.0, -85.0);
    BoundingBox frame = BoundingBox::of(raw_a);
    frame.extend(BoundingBox::of(raw_b));
    frame = normalization_frame(frame);
    CHECK(oracle::nested_loop_join(normalize(raw_a, frame), normalize(raw_b, frame)) ==
          oracle::nested_loop_join(raw_a, raw_b));
}

TEST_CASE("generate_synthetic") {
    CHECK(generate_synthetic({}).empty());
    SyntheticSpec spec;
    spec.n = 1000;
    spec.seed = 99;
    CHECK(generate_synthetic(spec) == generate_synthetic(spec));
    spec.distribution = SpatialDistribution::GaussianClustered;
    const auto clustered = generate_synthetic(spec);
    for (const Rect& r : clustered) {
        REQUIRE(r.valid());
        REQUIRE(r.x_l >= 0.0);
        REQUIRE(r.y_u <= 1.0);
    }

    spec = {};
    spec.n = 100000;
    spec.mean_x_extent = spec.mean_y_extent = 0.001;
    spec.seed = 5;
    const auto big = generate_synthetic(spec);
    const auto st = compute_stats(big, BoundingBox::unit());
    CHECK(st.avg_x_extent == doctest::Approx(0.001).epsilon(0.1));
    CHECK(st.avg_y_extent == doctest::Approx(0.001).epsilon(0.1));
}
