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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "spjoin/axis_model.hpp"
#include "spjoin/dataset_io.hpp"
#include "spjoin/engine.hpp"
#include "spjoin/oracle.hpp"
#include "spjoin/partitioner.hpp"

namespace py = pybind11;
using namespace spjoin;

namespace {

using Coords = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Ids = py::array_t<std::uint64_t, py::array::c_style | py::array::forcecast>;

template <class T>
std::vector<T> unpack(const Coords& coords, const std::optional<Ids>& ids, py::ssize_t width,
                      const char* what) {
    if (coords.ndim() != 2 || coords.shape(1) != width) {
        throw py::value_error(std::string(what) + " must have shape (n, " +
                              std::to_string(width) + ")");
    }
    const py::ssize_t n = coords.shape(0);
    if (ids && (ids->ndim() != 1 || ids->shape(0) != n)) {
        throw py::value_error(std::string(what) + " ids must have shape (n,)");
    }
    auto c = coords.unchecked<2>();
    std::vector<T> out(static_cast<std::size_t>(n));
    for (py::ssize_t i = 0; i < n; ++i) {
        const RectId id = ids ? ids->at(i) : static_cast<RectId>(i);
        if constexpr (std::is_same_v<T, Rect>) {
            out[i] = {id, c(i, 0), c(i, 1), c(i, 2), c(i, 3)};
            if (!out[i].valid()) {
                throw py::value_error(std::string(what) + " row " + std::to_string(i) +
                                      " has its lower corner above its upper corner");
            }
        } else {
            out[i] = {id, c(i, 0), c(i, 1)};
        }
    }
    return out;
}

py::array_t<std::uint64_t> pairs_array(const std::vector<IdPair>& pairs) {
    py::array_t<std::uint64_t> out({static_cast<py::ssize_t>(pairs.size()), py::ssize_t{2}});
    auto o = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        o(i, 0) = pairs[i].r;
        o(i, 1) = pairs[i].s;
    }
    return out;
}

Axis parse_axis(const std::string& s) {
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    throw py::value_error("axis must be 'x' or 'y', got '" + s + "'");
}

LayoutKind parse_layout(const std::string& s) {
    if (s == "1d") return LayoutKind::Stripes1D;
    if (s == "2d") return LayoutKind::Grid2D;
    throw py::value_error("layout must be '1d' or '2d', got '" + s + "'");
}

JoinConfig make_config(const std::string& layout, std::uint32_t k, const std::string& axis,
                       const std::string& partition_axis, unsigned threads, bool collect) {
    JoinConfig cfg;
    cfg.layout = PartitionLayout(parse_layout(layout), k, parse_axis(partition_axis));
    if (axis == "x") cfg.axis_policy = AxisPolicy::ForcedX;
    else if (axis == "y") cfg.axis_policy = AxisPolicy::ForcedY;
    else if (axis == "adaptive") cfg.axis_policy = AxisPolicy::Adaptive;
    else if (axis == "auto") cfg.axis_policy = AxisPolicy::Auto1D;
    else throw py::value_error("axis must be x, y, adaptive or auto, got '" + axis + "'");
    cfg.threads = threads;
    cfg.sink_mode = collect ? SinkMode::CollectPairs : SinkMode::CountOnly;
    return cfg;
}

py::dict report_dict(const JoinReport& rep, bool collect) {
    py::dict d;
    d["result_count"] = rep.result_count;
    d["partition_time"] = rep.partition_time;
    d["sort_time"] = rep.sort_time;
    d["join_time"] = rep.join_time;
    d["total_time"] = rep.total_time;
    d["pairs"] = collect ? py::object(pairs_array(rep.pairs)) : py::none();
    return d;
}

std::pair<py::array_t<std::uint64_t>, py::array_t<double>> split(const std::vector<Rect>& rects) {
    const auto n = static_cast<py::ssize_t>(rects.size());
    py::array_t<std::uint64_t> ids(std::vector<py::ssize_t>{n});
    py::array_t<double> coords({n, py::ssize_t{4}});
    auto i_ = ids.mutable_unchecked<1>();
    auto c = coords.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < n; ++i) {
        const Rect& r = rects[i];
        i_(i) = r.id;
        c(i, 0) = r.x_l;
        c(i, 1) = r.y_l;
        c(i, 2) = r.x_u;
        c(i, 3) = r.y_u;
    }
    return {ids, coords};
}

}  // namespace

PYBIND11_MODULE(_spjoin, m) {
    m.doc() = "Partition-based parallel spatial join of rectangle sets";

    // Registered base first: translators run newest first.
    const auto base = py::register_exception<Error>(m, "SpjoinError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    m.def(
        "join",
        [](const Coords& r, const Coords& s, std::optional<Ids> r_ids, std::optional<Ids> s_ids,
           const std::string& layout, std::uint32_t k, const std::string& axis,
           const std::string& partition_axis, unsigned threads, bool collect) {
            const auto rr = unpack<Rect>(r, r_ids, 4, "r");
            const auto ss = unpack<Rect>(s, s_ids, 4, "s");
            const JoinConfig cfg = make_config(layout, k, axis, partition_axis, threads, collect);
            JoinReport rep;
            {
                py::gil_scoped_release release;
                rep = spjoin::join(rr, ss, cfg);
            }
            return report_dict(rep, collect);
        },
        py::arg("r"), py::arg("s"), py::kw_only(), py::arg("r_ids") = py::none(),
        py::arg("s_ids") = py::none(), py::arg("layout") = "1d", py::arg("k") = 1,
        py::arg("axis") = "auto", py::arg("partition_axis") = "x", py::arg("threads") = 1,
        py::arg("collect") = false,
        "Intersection join of two (n, 4) arrays of [x_l, y_l, x_u, y_u] in the unit square.");

    m.def(
        "epsilon_join",
        [](const Coords& p, const Coords& q, double epsilon, std::optional<Ids> p_ids,
           std::optional<Ids> q_ids, const std::string& layout, std::uint32_t k,
           const std::string& axis, unsigned threads, bool collect) {
            const auto pp = unpack<Point>(p, p_ids, 2, "p");
            const auto qq = unpack<Point>(q, q_ids, 2, "q");
            const JoinConfig cfg = make_config(layout, k, axis, "x", threads, collect);
            JoinReport rep;
            {
                py::gil_scoped_release release;
                rep = spjoin::epsilon_distance_join(pp, qq, epsilon, cfg);
            }
            return report_dict(rep, collect);
        },
        py::arg("p"), py::arg("q"), py::arg("epsilon"), py::kw_only(),
        py::arg("p_ids") = py::none(), py::arg("q_ids") = py::none(), py::arg("layout") = "1d",
        py::arg("k") = 1, py::arg("axis") = "auto", py::arg("threads") = 1,
        py::arg("collect") = false, "Pairs of (n, 2) points within Euclidean distance epsilon.");

    m.def(
        "nested_loop_join",
        [](const Coords& r, const Coords& s, std::optional<Ids> r_ids, std::optional<Ids> s_ids) {
            return pairs_array(
                oracle::nested_loop_join(unpack<Rect>(r, r_ids, 4, "r"), unpack<Rect>(s, s_ids, 4, "s")));
        },
        py::arg("r"), py::arg("s"), py::kw_only(), py::arg("r_ids") = py::none(),
        py::arg("s_ids") = py::none(), "Brute-force reference join; sorted unique id pairs.");

    m.def(
        "nested_loop_distance",
        [](const Coords& p, const Coords& q, double epsilon, std::optional<Ids> p_ids,
           std::optional<Ids> q_ids) {
            return pairs_array(oracle::nested_loop_distance(unpack<Point>(p, p_ids, 2, "p"),
                                                            unpack<Point>(q, q_ids, 2, "q"),
                                                            epsilon));
        },
        py::arg("p"), py::arg("q"), py::arg("epsilon"), py::kw_only(),
        py::arg("p_ids") = py::none(), py::arg("q_ids") = py::none());

    m.def(
        "recommend_k",
        [](double avg_extent, const std::string& layout, std::uint32_t k_max) {
            return recommend_k(avg_extent, parse_layout(layout), k_max);
        },
        py::arg("avg_extent"), py::arg("layout") = "1d",
        py::arg("k_max") = kDefaultMaxPartitions);

    m.def(
        "select_axis",
        [](const Coords& r, const Coords& s, std::optional<std::uint32_t> buckets,
           std::uint32_t sample_stride) {
            const auto rr = unpack<Rect>(r, std::nullopt, 4, "r");
            const auto ss = unpack<Rect>(s, std::nullopt, 4, "s");
            double avg = 0.0;
            for (const Rect& x : rr) avg += x.extent(Axis::X) + x.extent(Axis::Y);
            for (const Rect& x : ss) avg += x.extent(Axis::X) + x.extent(Axis::Y);
            const std::size_t n = rr.size() + ss.size();
            avg = n ? avg / (2.0 * static_cast<double>(n)) : 0.0;
            const std::uint32_t k =
                buckets ? *buckets
                        : (avg > 0.0 ? bucket_count_for_tile(1.0, avg) : kMaxHistogramBuckets);
            const TileExtent unit{0.0, 1.0, 0.0, 1.0, 0, 0};
            const AxisHistograms h = build_histograms(rr, ss, unit, k, sample_stride);
            return py::make_tuple(to_string(select_axis(h)), h.candidates(Axis::X),
                                  h.candidates(Axis::Y));
        },
        py::arg("r"), py::arg("s"), py::kw_only(), py::arg("buckets") = py::none(),
        py::arg("sample_stride") = kDefaultSampleStride,
        "Sweep axis chosen by the histogram cost model, with both candidate estimates.");

    m.def(
        "generate_synthetic",
        [](std::size_t n, double mean_x_extent, double mean_y_extent,
           const std::string& distribution, std::uint64_t seed, RectId first_id) {
            SyntheticSpec spec;
            spec.n = n;
            spec.mean_x_extent = mean_x_extent;
            spec.mean_y_extent = mean_y_extent;
            if (distribution == "uniform") spec.distribution = SpatialDistribution::Uniform;
            else if (distribution == "clustered") spec.distribution = SpatialDistribution::GaussianClustered;
            else throw py::value_error("distribution must be 'uniform' or 'clustered'");
            spec.seed = seed;
            spec.first_id = first_id;
            return split(generate_synthetic(spec));
        },
        py::arg("n"), py::arg("mean_x_extent") = 0.001, py::arg("mean_y_extent") = 0.001,
        py::arg("distribution") = "uniform", py::arg("seed") = 1, py::arg("first_id") = 0,
        "Returns (ids, rects) with rects an (n, 4) array.");

    m.def(
        "load_dataset",
        [](const std::string& path, bool normalized) {
            Dataset d = load_dataset(path);
            if (normalized) {
                d.rects = normalize(d.rects, normalization_frame(BoundingBox::of(d.rects)));
            }
            return split(d.rects);
        },
        py::arg("path"), py::arg("normalized") = true,
        "Reads a CSV or binary MBR file; returns (ids, rects).");
}
