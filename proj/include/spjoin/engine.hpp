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

#ifndef SPJOIN_ENGINE_HPP
#define SPJOIN_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spjoin/axis_model.hpp"
#include "spjoin/geometry.hpp"
#include "spjoin/partitioner.hpp"
#include "spjoin/plane_sweep.hpp"

namespace spjoin {

/// How each partition picks its sweeping axis. Auto1D sweeps the axis the
/// stripes are not split on and is valid only for stripe layouts.
enum class AxisPolicy : std::uint8_t { ForcedX, ForcedY, Adaptive, Auto1D };

const char* to_string(AxisPolicy p) noexcept;
const char* to_string(LayoutKind k) noexcept;

struct JoinConfig {
    PartitionLayout layout = PartitionLayout::stripes(1);
    AxisPolicy axis_policy = AxisPolicy::Auto1D;
    unsigned threads = 1;
    SinkMode sink_mode = SinkMode::CountOnly;
    std::optional<std::uint32_t> sample_stride;  // defaults to 100
    std::optional<std::uint32_t> k_buckets;      // defaults to the per-tile rule

    /// Throws ConfigError when the combination is not runnable.
    void validate() const;
};

/// Size of one join task, reported for diagnostics.
struct TaskInfo {
    std::size_t tile = 0;
    std::size_t r_size = 0;
    std::size_t s_size = 0;
    Axis sweep_axis = Axis::X;
};

/// Outcome of a join. Times are wall-clock seconds; join_time includes the
/// sorting sub-phase, which is also reported alone as sort_time.
struct JoinReport {
    std::uint64_t result_count = 0;
    std::vector<IdPair> pairs;  // collect mode only, unordered
    double partition_time = 0.0;
    double sort_time = 0.0;
    double join_time = 0.0;
    double total_time = 0.0;
    std::vector<TaskInfo> tasks;
};

/// Work of the joining phase: one sort task per non-empty (tile, input)
/// buffer and one join task per tile where both buffers are non-empty.
/// Join tasks are ordered by decreasing |R_T| + |S_T|.
struct TaskPlan {
    enum class Input : std::uint8_t { R, S };
    struct SortTask {
        std::size_t tile;
        Input input;
    };
    struct JoinTask {
        std::size_t tile;
        std::size_t size;
    };
    std::vector<SortTask> sorts;
    std::vector<JoinTask> joins;
};

TaskPlan build_task_queue(const PartitionedDataset& r_parts, const PartitionedDataset& s_parts);

/// Partition-based spatial merge join over inputs normalized to [0,1]^2.
/// Not reentrant: one join() at a time per engine.
class JoinEngine {
public:
    explicit JoinEngine(JoinConfig cfg);

    const JoinConfig& config() const noexcept { return cfg_; }

    /// All (r, s) in R x S whose rectangles intersect, each exactly once.
    JoinReport join(std::span<const Rect> r_set, std::span<const Rect> s_set);

    /// All (p, q) with Euclidean distance <= epsilon, evaluated as a join of
    /// side-epsilon squares followed by an exact distance check.
    JoinReport epsilon_distance_join(std::span<const Point> p_set, std::span<const Point> q_set,
                                     double epsilon);

private:
    JoinConfig cfg_;
};

inline JoinReport join(std::span<const Rect> r_set, std::span<const Rect> s_set,
                       const JoinConfig& cfg) {
    return JoinEngine(cfg).join(r_set, s_set);
}

inline JoinReport epsilon_distance_join(std::span<const Point> p_set, std::span<const Point> q_set,
                                        double epsilon, const JoinConfig& cfg) {
    return JoinEngine(cfg).epsilon_distance_join(p_set, q_set, epsilon);
}

}  // namespace spjoin

#endif  // SPJOIN_ENGINE_HPP
