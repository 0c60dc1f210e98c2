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

#include "spjoin/oracle.hpp"

#include <algorithm>

namespace spjoin::oracle {

namespace {

// Written as "not separated on either axis", independently of intersects().
bool overlap(const Rect& a, const Rect& b) {
    const bool separated_x = a.x_u < b.x_l || b.x_u < a.x_l;
    const bool separated_y = a.y_u < b.y_l || b.y_u < a.y_l;
    return !separated_x && !separated_y;
}

std::vector<IdPair> as_set(std::vector<IdPair> pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

}  // namespace

std::vector<IdPair> nested_loop_join(std::span<const Rect> r_set, std::span<const Rect> s_set) {
    std::vector<IdPair> out;
    for (const Rect& r : r_set) {
        for (const Rect& s : s_set) {
            if (overlap(r, s)) out.push_back({r.id, s.id});
        }
    }
    return as_set(std::move(out));
}

std::vector<IdPair> nested_loop_distance(std::span<const Point> p_set,
                                         std::span<const Point> q_set, double epsilon) {
    std::vector<IdPair> out;
    const double eps2 = epsilon * epsilon;
    for (const Point& p : p_set) {
        for (const Point& q : q_set) {
            const double dx = p.x - q.x;
            const double dy = p.y - q.y;
            if (dx * dx + dy * dy <= eps2) out.push_back({p.id, q.id});
        }
    }
    return as_set(std::move(out));
}

}  // namespace spjoin::oracle
