# Copyright 2026 The spjoin Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Partition-based parallel spatial joins over rectangle and point sets."""

from ._spjoin import (
    ConfigError,
    SpjoinError,
    epsilon_join,
    generate_synthetic,
    join,
    load_dataset,
    nested_loop_distance,
    nested_loop_join,
    recommend_k,
    select_axis,
)

__all__ = [
    "ConfigError",
    "SpjoinError",
    "epsilon_join",
    "generate_synthetic",
    "join",
    "load_dataset",
    "nested_loop_distance",
    "nested_loop_join",
    "recommend_k",
    "select_axis",
]
