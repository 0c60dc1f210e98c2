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

#ifndef SPJOIN_DATASET_IO_HPP
#define SPJOIN_DATASET_IO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spjoin/geometry.hpp"

namespace spjoin {

/// Malformed input file. what() names the file and line.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error(msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class NormalizationError : public Error {
public:
    using Error::Error;
};

struct BoundingBox {
    double x_l = 0.0;
    double y_l = 0.0;
    double x_u = 0.0;
    double y_u = 0.0;
    bool empty = true;

    void extend(const Rect& r) noexcept;
    void extend(const BoundingBox& b) noexcept;
    double width() const noexcept { return x_u - x_l; }
    double height() const noexcept { return y_u - y_l; }
    bool within_unit_square() const noexcept;

    static BoundingBox unit() noexcept { return {0.0, 0.0, 1.0, 1.0, false}; }
    static BoundingBox of(std::span<const Rect> rects) noexcept;
};

/// Cardinality and average normalized projection lengths of a dataset.
struct DatasetStats {
    std::size_t cardinality = 0;
    double avg_x_extent = 0.0;
    double avg_y_extent = 0.0;
    BoundingBox raw_bbox;
};

struct Dataset {
    std::vector<Rect> rects;  // as read, not normalized
    DatasetStats stats;
};

/// Frame used to normalize one or more datasets together: the union of
/// their bounding boxes, or the unit square when that union already lies
/// inside it (already-normalized data is then left unchanged).
BoundingBox normalization_frame(const BoundingBox& combined) noexcept;

/// Affine map of each axis of `frame` onto [0,1]. Without a frame the
/// rectangles' own bounding box is used. A frame with zero width or height
/// is rejected.
std::vector<Rect> normalize(std::span<const Rect> rects,
                            const std::optional<BoundingBox>& frame = std::nullopt);

/// Stats of `rects` measured in `frame`.
DatasetStats compute_stats(std::span<const Rect> rects, const BoundingBox& frame);

/// Reads `id,x_l,y_l,x_u,y_u` records; a first line whose first field is not
/// numeric is treated as a header. Stats are measured in the dataset's
/// normalization frame.
Dataset load_mbr_csv(const std::filesystem::path& path);

inline constexpr char kBinaryMagic[4] = {'S', 'J', 'B', '1'};

/// Little-endian `SJB1`, u64 count, then count x (u64 id, f64 x_l, y_l, x_u, y_u).
Dataset load_mbr_binary(const std::filesystem::path& path);

/// Binary when the file starts with the binary magic, CSV otherwise.
Dataset load_dataset(const std::filesystem::path& path);

void save_mbr_csv(const std::filesystem::path& path, std::span<const Rect> rects);
void save_mbr_binary(const std::filesystem::path& path, std::span<const Rect> rects);

enum class SpatialDistribution : std::uint8_t { Uniform, GaussianClustered };

struct SyntheticSpec {
    std::size_t n = 0;
    double mean_x_extent = 0.001;
    double mean_y_extent = 0.001;
    SpatialDistribution distribution = SpatialDistribution::Uniform;
    std::uint32_t clusters = 16;
    double cluster_sigma = 0.05;
    std::uint64_t seed = 1;
    RectId first_id = 0;
};

/// Deterministic for a fixed spec: centers follow the spatial distribution,
/// extents are exponential around the per-axis means, clipped to [0,1].
std::vector<Rect> generate_synthetic(const SyntheticSpec& spec);

/// Uniform points in [0,1]^2 with ids first_id, first_id+1, ...
std::vector<Point> generate_points(std::size_t n, std::uint64_t seed, RectId first_id = 0);

}  // namespace spjoin

#endif  // SPJOIN_DATASET_IO_HPP
