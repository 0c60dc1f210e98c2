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

#ifndef SPJOIN_ORACLE_HPP
#define SPJOIN_ORACLE_HPP

#include <span>
#include <vector>

#include "spjoin/geometry.hpp"

// Exhaustive reference joins. Nothing here touches layouts, histograms or
// the sweep kernel; cost is O(|R| * |S|).
namespace spjoin::oracle {

/// Sorted, duplicate-free id pairs of every intersecting (r, s).
std::vector<IdPair> nested_loop_join(std::span<const Rect> r_set, std::span<const Rect> s_set);

/// Sorted, duplicate-free id pairs of every (p, q) within distance epsilon.
std::vector<IdPair> nested_loop_distance(std::span<const Point> p_set,
                                         std::span<const Point> q_set, double epsilon);

}  // namespace spjoin::oracle

#endif  // SPJOIN_ORACLE_HPP
