# coding=utf-8
# Copyright 2025 The Google Research Authors.
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

from detold.graph import Graph, VertexSet, enumerate_graphs, named_graph, trail_set
from detold.verify import Level, Verdict, check, forced_detectors
from detold.solver import SolveResult, solve, solve_bb, solve_oracle
from detold.cubic import build_conflict_graph, detold_min_cubic, greedy_density_bound, is_detold_cubic
from detold.reduction import SatInstance, ReductionArtifact, build_instance
from detold.grids import GridFamily, PeriodicPattern, search_pattern, verify_pattern
