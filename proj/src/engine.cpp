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

#include "spjoin/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "spjoin/parallel.hpp"

namespace spjoin {

const char* to_string(AxisPolicy p) noexcept {
    switch (p) {
        case AxisPolicy::ForcedX: return "x";
        case AxisPolicy::ForcedY: return "y";
        case AxisPolicy::Adaptive: return "adaptive";
        case AxisPolicy::Auto1D: return "auto";
    }
    return "?";
}

const char* to_string(LayoutKind k) noexcept {
    return k == LayoutKind::Stripes1D ? "1d" : "2d";
}

void JoinConfig::validate() const {
    if (threads == 0) throw ConfigError("thread count must be at least 1");
    if (axis_policy == AxisPolicy::Auto1D && layout.kind() != LayoutKind::Stripes1D) {
        throw ConfigError("axis policy 'auto' applies to 1D stripes only; use 'adaptive' for 2D");
    }
    if (sample_stride && *sample_stride == 0) throw ConfigError("sample stride must be >= 1");
    if (k_buckets && *k_buckets == 0) throw ConfigError("k_buckets must be >= 1");
}

TaskPlan build_task_queue(const PartitionedDataset& r_parts, const PartitionedDataset& s_parts) {
    if (r_parts.tile_count() != s_parts.tile_count()) {
        throw ConfigError("inputs were partitioned with different layouts");
    }
    TaskPlan plan;
    for (std::size_t t = 0; t < r_parts.tile_count(); ++t) {
        const std::size_t nr = r_parts.count(t);
        const std::size_t ns = s_parts.count(t);
        if (nr > 0) plan.sorts.push_back({t, TaskPlan::Input::R});
        if (ns > 0) plan.sorts.push_back({t, TaskPlan::Input::S});
        if (nr > 0 && ns > 0) plan.joins.push_back({t, nr + ns});
    }
    std::stable_sort(plan.joins.begin(), plan.joins.end(),
                     [](const TaskPlan::JoinTask& a, const TaskPlan::JoinTask& b) {
                         return a.size > b.size;
                     });
    return plan;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

enum class FilterKind { None, Grid, Stripes };

template <class Output>
void sweep_tile(std::span<const Rect> r_tile, std::span<const Rect> s_tile, Axis sweep_axis,
                FilterKind filter, const TileExtent& extent, Axis partition_axis, Output& out) {
    switch (filter) {
        case FilterKind::None:
            detail::forward_scan(r_tile, s_tile, sweep_axis,
                                 [&](const Rect& r, const Rect& s) { out(r, s); });
            break;
        case FilterKind::Grid:
            detail::forward_scan(r_tile, s_tile, sweep_axis, [&](const Rect& r, const Rect& s) {
                if (duplicate_test_2d(r, s, extent)) out(r, s);
            });
            break;
        case FilterKind::Stripes:
            if (partition_axis == Axis::X) {
                detail::forward_scan(r_tile, s_tile, sweep_axis, [&](const Rect& r, const Rect& s) {
                    if (std::max(r.x_l, s.x_l) >= extent.x_l) out(r, s);
                });
            } else {
                detail::forward_scan(r_tile, s_tile, sweep_axis, [&](const Rect& r, const Rect& s) {
                    if (std::max(r.y_l, s.y_l) >= extent.y_l) out(r, s);
                });
            }
            break;
    }
}

// Average rectangle extent over both inputs and both axes.
double mean_extent(const PartitionedDataset& a, const PartitionedDataset& b) {
    const double na = static_cast<double>(a.source_size);
    const double nb = static_cast<double>(b.source_size);
    if (na + nb == 0.0) return 0.0;
    return (na * (a.avg_x_extent + a.avg_y_extent) + nb * (b.avg_x_extent + b.avg_y_extent)) /
           (2.0 * (na + nb));
}

// Partition, choose axes, sort and sweep. `accept(r, s, sink)` decides
// what reaches the sink for each duplicate-free intersecting pair.
template <class Accept>
JoinReport run_join(const JoinConfig& cfg, std::span<const Rect> r_set,
                    std::span<const Rect> s_set, Accept accept) {
    cfg.validate();
    const unsigned m = cfg.threads;
    const PartitionLayout& layout = cfg.layout;
    JoinReport report;
    const auto t_start = Clock::now();

    // Partitioning phase.
    PartitionedDataset r_parts = partition(r_set, layout, m);
    PartitionedDataset s_parts = partition(s_set, layout, m);
    const TaskPlan plan = build_task_queue(r_parts, s_parts);

    std::vector<Axis> axes(layout.tile_count(), Axis::X);
    switch (cfg.axis_policy) {
        case AxisPolicy::ForcedX: break;
        case AxisPolicy::ForcedY: std::fill(axes.begin(), axes.end(), Axis::Y); break;
        case AxisPolicy::Auto1D:
            std::fill(axes.begin(), axes.end(), other(layout.partition_axis()));
            break;
        case AxisPolicy::Adaptive: {
            const double avg = mean_extent(r_parts, s_parts);
            const std::uint32_t stride = cfg.sample_stride.value_or(kDefaultSampleStride);
            TaskCursor cursor(plan.joins.size());
            run_workers(m, [&](unsigned) {
                std::size_t i;
                while (cursor.next(i)) {
                    const std::size_t t = plan.joins[i].tile;
                    const TileExtent extent = layout.tile(t);
                    std::uint32_t buckets = kMaxHistogramBuckets;
                    if (cfg.k_buckets) {
                        buckets = *cfg.k_buckets;
                    } else if (avg > 0.0) {
                        buckets = bucket_count_for_tile(
                            std::max(extent.length(Axis::X), extent.length(Axis::Y)), avg);
                    }
                    axes[t] = select_axis(
                        build_histograms(r_parts.tile(t), s_parts.tile(t), extent, buckets, stride));
                }
            });
            break;
        }
    }
    report.partition_time = seconds_since(t_start);

    // Joining phase: sort sub-phase, barrier, join sub-phase.
    const auto t_join = Clock::now();
    {
        TaskCursor cursor(plan.sorts.size());
        run_workers(m, [&](unsigned) {
            std::size_t i;
            while (cursor.next(i)) {
                const auto& task = plan.sorts[i];
                auto& parts = task.input == TaskPlan::Input::R ? r_parts : s_parts;
                sort_by_lower(parts.tile(task.tile), axes[task.tile]);
            }
        });
    }
    report.sort_time = seconds_since(t_join);

    const FilterKind filter = layout.tile_count() == 1        ? FilterKind::None
                              : layout.kind() == LayoutKind::Grid2D ? FilterKind::Grid
                                                                    : FilterKind::Stripes;
    std::vector<ResultSink> sinks(m, ResultSink(cfg.sink_mode));
    {
        TaskCursor cursor(plan.joins.size());
        run_workers(m, [&](unsigned w) {
            ResultSink& sink = sinks[w];
            auto out = [&](const Rect& r, const Rect& s) { accept(r, s, sink); };
            std::size_t i;
            while (cursor.next(i)) {
                const std::size_t t = plan.joins[i].tile;
                sweep_tile(r_parts.tile(t), s_parts.tile(t), axes[t], filter, layout.tile(t),
                           layout.partition_axis(), out);
            }
        });
    }
    report.join_time = seconds_since(t_join);

    for (ResultSink& sink : sinks) {
        report.result_count += sink.count();
        if (cfg.sink_mode == SinkMode::CollectPairs) {
            auto pairs = sink.take_pairs();
            report.pairs.insert(report.pairs.end(), pairs.begin(), pairs.end());
        }
    }
    report.tasks.reserve(plan.joins.size());
    for (const auto& task : plan.joins) {
        report.tasks.push_back({task.tile, r_parts.count(task.tile), s_parts.count(task.tile),
                                axes[task.tile]});
    }
    report.total_time = seconds_since(t_start);
    return report;
}

}  // namespace

JoinEngine::JoinEngine(JoinConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

JoinReport JoinEngine::join(std::span<const Rect> r_set, std::span<const Rect> s_set) {
    return run_join(cfg_, r_set, s_set,
                    [](const Rect& r, const Rect& s, ResultSink& sink) { sink.add(r.id, s.id); });
}

JoinReport JoinEngine::epsilon_distance_join(std::span<const Point> p_set,
                                             std::span<const Point> q_set, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ConfigError("epsilon must be a positive finite distance");
    }
    // Squares of side epsilon; a hair wider so rounding of the bounds can
    // never drop a pair at distance exactly epsilon. Refinement is exact.
    const double half = epsilon / 2.0 + std::max(epsilon * 1e-9, 1e-14);
    auto squares = [half](std::span<const Point> pts) {
        std::vector<Rect> out;
        out.reserve(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Point& p = pts[i];
            out.push_back({static_cast<RectId>(i), std::max(0.0, p.x - half),
                           std::max(0.0, p.y - half), std::min(1.0, p.x + half),
                           std::min(1.0, p.y + half)});
        }
        return out;
    };
    const std::vector<Rect> p_sq = squares(p_set);
    const std::vector<Rect> q_sq = squares(q_set);
    const double eps2 = epsilon * epsilon;
    return run_join(cfg_, p_sq, q_sq, [&](const Rect& r, const Rect& s, ResultSink& sink) {
        const Point& p = p_set[r.id];
        const Point& q = q_set[s.id];
        const double dx = p.x - q.x;
        const double dy = p.y - q.y;
        if (dx * dx + dy * dy <= eps2) sink.add(p.id, q.id);
    });
}

}  // namespace spjoin
