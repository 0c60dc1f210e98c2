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

#include "spjoin/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

namespace spjoin {

void BoundingBox::extend(const Rect& r) noexcept {
    if (empty) {
        *this = {r.x_l, r.y_l, r.x_u, r.y_u, false};
        return;
    }
    x_l = std::min(x_l, r.x_l);
    y_l = std::min(y_l, r.y_l);
    x_u = std::max(x_u, r.x_u);
    y_u = std::max(y_u, r.y_u);
}

void BoundingBox::extend(const BoundingBox& b) noexcept {
    if (b.empty) return;
    extend(Rect{0, b.x_l, b.y_l, b.x_u, b.y_u});
}

bool BoundingBox::within_unit_square() const noexcept {
    return !empty && x_l >= 0.0 && y_l >= 0.0 && x_u <= 1.0 && y_u <= 1.0;
}

BoundingBox BoundingBox::of(std::span<const Rect> rects) noexcept {
    BoundingBox b;
    for (const Rect& r : rects) b.extend(r);
    return b;
}

BoundingBox normalization_frame(const BoundingBox& combined) noexcept {
    if (combined.empty || combined.within_unit_square()) return BoundingBox::unit();
    return combined;
}

std::vector<Rect> normalize(std::span<const Rect> rects, const std::optional<BoundingBox>& frame) {
    const BoundingBox f = frame ? *frame : BoundingBox::of(rects);
    if (rects.empty() && (!frame || f.empty)) return {};
    if (f.empty || !(f.width() > 0.0) || !(f.height() > 0.0)) {
        throw NormalizationError("cannot normalize against a frame with zero width or height");
    }
    const double sx = 1.0 / f.width();
    const double sy = 1.0 / f.height();
    auto map = [](double v, double lo, double scale) {
        return std::clamp((v - lo) * scale, 0.0, 1.0);
    };
    std::vector<Rect> out;
    out.reserve(rects.size());
    for (const Rect& r : rects) {
        out.push_back({r.id, map(r.x_l, f.x_l, sx), map(r.y_l, f.y_l, sy), map(r.x_u, f.x_l, sx),
                       map(r.y_u, f.y_l, sy)});
    }
    return out;
}

DatasetStats compute_stats(std::span<const Rect> rects, const BoundingBox& frame) {
    DatasetStats st;
    st.cardinality = rects.size();
    st.raw_bbox = BoundingBox::of(rects);
    if (rects.empty()) return st;
    const double w = frame.width() > 0.0 ? frame.width() : 1.0;
    const double h = frame.height() > 0.0 ? frame.height() : 1.0;
    double sx = 0.0;
    double sy = 0.0;
    for (const Rect& r : rects) {
        sx += r.x_u - r.x_l;
        sy += r.y_u - r.y_l;
    }
    st.avg_x_extent = sx / w / static_cast<double>(rects.size());
    st.avg_y_extent = sy / h / static_cast<double>(rects.size());
    return st;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

template <class T>
bool parse_number(std::string_view field, T& value) {
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last && first != last;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

Dataset finish(std::vector<Rect> rects) {
    Dataset d;
    const BoundingBox frame = normalization_frame(BoundingBox::of(rects));
    d.stats = compute_stats(rects, frame);
    d.rects = std::move(rects);
    return d;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line) + ": ";
}

}  // namespace

Dataset load_mbr_csv(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::vector<Rect> rects;
    std::string_view rest(text);
    std::size_t line_no = 0;
    bool first_content = true;
    while (!rest.empty()) {
        const std::size_t nl = rest.find('\n');
        const std::string_view line = trim(rest.substr(0, nl));
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;

        const auto fields = split_fields(line);
        if (first_content) {
            first_content = false;
            double probe;
            if (fields.size() == 5 && !parse_number(fields[0], probe)) continue;  // header
        }
        if (fields.size() != 5) {
            throw ParseError(where(path, line_no) + "expected 5 fields id,x_l,y_l,x_u,y_u, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        Rect r;
        if (!parse_number(fields[0], r.id) || !parse_number(fields[1], r.x_l) ||
            !parse_number(fields[2], r.y_l) || !parse_number(fields[3], r.x_u) ||
            !parse_number(fields[4], r.y_u)) {
            throw ParseError(where(path, line_no) + "malformed record '" + std::string(line) + "'",
                             line_no);
        }
        if (!r.valid()) {
            throw ParseError(where(path, line_no) + "lower corner exceeds upper corner", line_no);
        }
        rects.push_back(r);
    }
    return finish(std::move(rects));
}

namespace {

template <class T>
T from_le(const unsigned char* p) {
    std::array<unsigned char, sizeof(T)> b;
    std::memcpy(b.data(), p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
    T v;
    std::memcpy(&v, b.data(), sizeof(T));
    return v;
}

template <class T>
void to_le(std::ostream& out, T v) {
    std::array<unsigned char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
    out.write(reinterpret_cast<const char*>(b.data()), sizeof(T));
}

constexpr std::size_t kHeaderSize = 12;
constexpr std::size_t kRecordSize = 40;

}  // namespace

Dataset load_mbr_binary(const std::filesystem::path& path) {
    const std::string blob = read_file(path);
    const auto* data = reinterpret_cast<const unsigned char*>(blob.data());
    if (blob.size() < kHeaderSize || std::memcmp(blob.data(), kBinaryMagic, 4) != 0) {
        throw ParseError(path.string() + ": missing SJB1 header", 0);
    }
    const auto count = from_le<std::uint64_t>(data + 4);
    if ((blob.size() - kHeaderSize) / kRecordSize != count ||
        (blob.size() - kHeaderSize) % kRecordSize != 0) {
        throw ParseError(path.string() + ": header announces " + std::to_string(count) +
                             " records but the payload size disagrees",
                         0);
    }
    std::vector<Rect> rects(count);
    for (std::size_t i = 0; i < count; ++i) {
        const unsigned char* p = data + kHeaderSize + i * kRecordSize;
        Rect& r = rects[i];
        r.id = from_le<std::uint64_t>(p);
        r.x_l = from_le<double>(p + 8);
        r.y_l = from_le<double>(p + 16);
        r.x_u = from_le<double>(p + 24);
        r.y_u = from_le<double>(p + 32);
        if (!r.valid()) {
            throw ParseError(path.string() + ": record " + std::to_string(i + 1) +
                                 " has its lower corner above its upper corner",
                             i + 1);
        }
    }
    return finish(std::move(rects));
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() == 4 && std::memcmp(magic, kBinaryMagic, 4) == 0) return load_mbr_binary(path);
    return load_mbr_csv(path);
}

void save_mbr_csv(const std::filesystem::path& path, std::span<const Rect> rects) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out.precision(17);
    out << "id,x_l,y_l,x_u,y_u\n";
    for (const Rect& r : rects) {
        out << r.id << ',' << r.x_l << ',' << r.y_l << ',' << r.x_u << ',' << r.y_u << '\n';
    }
}

void save_mbr_binary(const std::filesystem::path& path, std::span<const Rect> rects) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(kBinaryMagic, 4);
    to_le<std::uint64_t>(out, rects.size());
    for (const Rect& r : rects) {
        to_le(out, r.id);
        to_le(out, r.x_l);
        to_le(out, r.y_l);
        to_le(out, r.x_u);
        to_le(out, r.y_u);
    }
}

std::vector<Rect> generate_synthetic(const SyntheticSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> offset(0.0, spec.cluster_sigma);

    std::vector<std::array<double, 2>> centers;
    if (spec.distribution == SpatialDistribution::GaussianClustered) {
        const std::uint32_t n_clusters = std::max<std::uint32_t>(1, spec.clusters);
        for (std::uint32_t c = 0; c < n_clusters; ++c) centers.push_back({unit(rng), unit(rng)});
    }
    auto extent = [&](double mean) {
        if (!(mean > 0.0)) return 0.0;
        return std::exponential_distribution<double>(1.0 / mean)(rng);
    };

    std::vector<Rect> out;
    out.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        double cx;
        double cy;
        if (centers.empty()) {
            cx = unit(rng);
            cy = unit(rng);
        } else {
            const auto& c = centers[rng() % centers.size()];
            cx = std::clamp(c[0] + offset(rng), 0.0, 1.0);
            cy = std::clamp(c[1] + offset(rng), 0.0, 1.0);
        }
        const double ex = extent(spec.mean_x_extent);
        const double ey = extent(spec.mean_y_extent);
        out.push_back({spec.first_id + i, std::max(0.0, cx - ex / 2), std::max(0.0, cy - ey / 2),
                       std::min(1.0, cx + ex / 2), std::min(1.0, cy + ey / 2)});
    }
    return out;
}

std::vector<Point> generate_points(std::size_t n, std::uint64_t seed, RectId first_id) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = unit(rng);
        out.push_back({first_id + i, x, unit(rng)});
    }
    return out;
}

}  // namespace spjoin
