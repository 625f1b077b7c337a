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

from itertools import combinations

from hypothesis import given, strategies as st

from detold.graph import Graph, VertexSet, trail_set
from detold.solver import solve_bb, solve_oracle
from detold.verify import Level, check, forced_detectors, satisfies
from utils.graph_io import parse_graph, to_edge_list

LEVELS = list(Level)


@st.composite
def graphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    present = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [pair for pair, on in zip(pairs, present) if on])


@st.composite
def graph_and_set(draw, max_n=8):
    g = draw(graphs(max_n=max_n))
    mask = draw(st.integers(0, (1 << g.n) - 1))
    return g, VertexSet(g.n, mask)


@given(graph_and_set(), st.sampled_from(LEVELS), st.data())
def test_adding_detectors_keeps_ok(gs, level, data):
    g, s = gs
    if not check(g, s, level).ok:
        return
    v = data.draw(st.integers(0, g.n - 1))
    assert check(g, s | [v], level).ok


@given(graph_and_set())
def test_level_hierarchy(gs):
    g, s = gs
    if check(g, s, Level.DETOLD).ok:
        assert check(g, s, Level.REDOLD).ok
    if check(g, s, Level.REDOLD).ok:
        assert check(g, s, Level.OLD).ok


@given(graph_and_set(), st.sampled_from(LEVELS))
def test_shortcut_matches_all_pairs(gs, level):
    g, s = gs
    assert check(g, s, level, shortcut=True).failures == check(g, s, level, shortcut=False).failures


@given(graph_and_set(), st.sampled_from(LEVELS))
def test_fast_path_matches_check(gs, level):
    g, s = gs
    assert satisfies(g, s.mask, level) == check(g, s, level).ok


@given(graphs(max_n=7), st.sampled_from(LEVELS))
def test_exists_iff_full_set_passes(g, level):
    assert solve_oracle(g, level).feasible == check(g, VertexSet.full(g.n), level).ok


@given(graphs(max_n=8), st.sampled_from(LEVELS))
def test_branch_and_bound_matches_oracle(g, level):
    oracle, bb = solve_oracle(g, level), solve_bb(g, level)
    assert oracle.feasible == bb.feasible
    if oracle.feasible:
        assert oracle.optimum == bb.optimum
        assert oracle.witness == bb.witness
        assert forced_detectors(g, level).issubset(bb.witness)


@given(graphs(), st.data())
def test_two_trails_are_common_neighbors(g, data):
    v = data.draw(st.integers(0, g.n - 1))
    expected = {u for u in range(g.n) if u != v and g.masks[u] & g.masks[v]}
    assert set(trail_set(g, v, 2).members) == expected


def test_cubic_trail_sizes(cubic_corpus):
    for g in cubic_corpus:
        for v in range(g.n):
            assert len(trail_set(g, v, 2)) <= 6
            assert len(trail_set(g, v, 4)) <= 24


@given(graphs())
def test_serialization_round_trip(g):
    assert Graph.from_graph6(g.to_graph6()) == g
    assert parse_graph(to_edge_list(g)) == g


@given(st.integers(1, 40).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.integers(0, n - 1)), st.sets(st.integers(0, n - 1)))))
def test_vertex_set_operations(args):
    n, a, b = args
    sa, sb = VertexSet.from_iterable(n, a), VertexSet.from_iterable(n, b)
    assert set(sa | sb) == a | b
    assert set(sa & sb) == a & b
    assert set(sa - sb) == a - b
    assert set(sa ^ sb) == a ^ b
    assert set(sa.complement()) == set(range(n)) - a
    assert len(sa) == len(a)
    assert sa.issubset(sa | sb)
    assert sa.to_list() == sorted(a)
