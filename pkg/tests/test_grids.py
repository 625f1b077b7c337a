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

import os
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from detold.errors import InputError
from detold.grids import (GridFamily, PeriodicPattern, add_detector, grid_neighbors, lattice_basis, lattices,
                          pattern_density, reduce_cell, search_pattern, torus_graph, translate, verify_pattern)
from detold.verify import Level, UnderDominated, check
from evaluate import PATTERN_DIR
from utils.patterns import load_pattern

FAMILIES = list(GridFamily)


def full_pattern(family, p1, p2):
    p = PeriodicPattern(family, p1, p2)
    return PeriodicPattern(family, p1, p2, frozenset(p.cells()))


@st.composite
def patterns(draw, max_size=8):
    """随机周期格上的模式，检测器取全部格子去掉至多两个，合法与不合法的都会出现"""
    family = draw(st.sampled_from(FAMILIES))
    sizes = [s for s in range(1, max_size + 1) if list(lattices(family, s))]
    size = draw(st.sampled_from(sizes))
    p1, p2 = draw(st.sampled_from(list(lattices(family, size))))
    cells = full_pattern(family, p1, p2).cells()
    removed = draw(st.sets(st.sampled_from(cells), max_size=2))
    return PeriodicPattern(family, p1, p2, frozenset(cells) - removed)


class TestNeighbors:
    @pytest.mark.parametrize('family, expected', [('sqr', 4), ('tri', 6), ('kng', 8), ('hex', 3)])
    def test_degree(self, family, expected):
        f = GridFamily.parse(family)
        assert f.degree == expected
        for cell in [(0, 0), (1, 0), (3, -2), (-5, 7)]:
            assert len(grid_neighbors(f, cell)) == expected

    @pytest.mark.parametrize('family', FAMILIES)
    def test_symmetric(self, family):
        for x in range(-3, 4):
            for y in range(-3, 4):
                for z in grid_neighbors(family, (x, y)):
                    assert (x, y) in grid_neighbors(family, z)

    def test_hex_brick_wall(self):
        assert grid_neighbors('hex', (0, 0)) == {(1, 0), (-1, 0), (0, 1)}
        assert grid_neighbors('hex', (1, 0)) == {(2, 0), (0, 0), (1, -1)}

    def test_parse(self):
        assert GridFamily.parse('HEX') is GridFamily.HEX
        with pytest.raises(InputError):
            GridFamily.parse('cube')


class TestLattice:
    def test_basis(self):
        assert lattice_basis((2, 0), (0, 2)) == (2, 0, 2)
        assert lattice_basis((4, 0), (1, 1)) == (4, 1, 1)

    @given(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), st.tuples(st.integers(-6, 6), st.integers(-6, 6)))
    def test_basis_spans_periods(self, p1, p2):
        det = p1[0] * p2[1] - p1[1] * p2[0]
        if det == 0:
            with pytest.raises(InputError):
                lattice_basis(p1, p2)
            return
        a, b, c = basis = lattice_basis(p1, p2)
        assert a > 0 and c > 0 and 0 <= b < a
        assert a * c == abs(det)
        assert reduce_cell(p1, basis) == (0, 0)
        assert reduce_cell(p2, basis) == (0, 0)

    def test_degenerate_periods(self):
        with pytest.raises(InputError):
            PeriodicPattern('sqr', (1, 2), (2, 4))

    def test_hex_needs_even_periods(self):
        with pytest.raises(InputError):
            PeriodicPattern('hex', (1, 0), (0, 2))

    def test_lattice_count(self):
        # 指数为 n 的子格个数等于 n 的因子和
        assert len(list(lattices('sqr', 6))) == 12
        assert all(a % 2 == 0 and (b + c) % 2 == 0 for (a, _), (b, c) in lattices('hex', 8))

    def test_detectors_are_reduced(self):
        p = PeriodicPattern('sqr', (2, 0), (0, 2), frozenset({(2, 2), (3, -1)}))
        assert p.detectors == {(0, 0), (1, 1)}
        assert p.is_detector((4, -2))
        assert not p.is_detector((1, 0))


class TestVerify:
    def test_densities(self):
        sqr = PeriodicPattern('sqr', (4, 0), (0, 1), frozenset({(0, 0), (1, 0), (2, 0)}))
        assert pattern_density(sqr) == Fraction(3, 4)
        assert pattern_density(full_pattern('tri', (2, 0), (0, 2))) == 1
        kng = PeriodicPattern('kng', (30, 0), (0, 1), frozenset((x, 0) for x in range(13)))
        assert pattern_density(kng) == Fraction(13, 30)

    def test_empty_pattern(self):
        verdict = verify_pattern(PeriodicPattern('sqr', (1, 0), (0, 1)))
        assert not verdict.ok
        assert verdict.first() == UnderDominated((0, 0), 0, 2)

    @pytest.mark.parametrize('family, p1, p2', [
        ('tri', (2, 0), (0, 2)),
        ('sqr', (1, 0), (0, 1)),
        ('kng', (3, 0), (1, 2)),
        ('hex', (2, 0), (1, 1)),
    ])
    def test_all_detectors(self, family, p1, p2):
        p = full_pattern(family, p1, p2)
        assert verify_pattern(p).ok
        g, s = torus_graph(p)
        assert check(g, s, Level.DETOLD).ok

    def test_sparse_rows_fail(self):
        # 隔行放置：同一行距离 2 的两个格子只差一个检测器
        p = PeriodicPattern('tri', (1, 0), (0, 2), frozenset({(0, 0)}))
        assert not verify_pattern(p).ok

    @given(patterns())
    def test_torus_agrees(self, p):
        g, s = torus_graph(p)
        assert verify_pattern(p).ok == check(g, s, Level.DETOLD).ok

    @given(patterns(), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
    def test_translation_invariant(self, p, vector):
        if p.family is GridFamily.HEX and sum(vector) % 2:
            vector = (vector[0] + 1, vector[1])
        moved = translate(p, vector)
        assert pattern_density(moved) == pattern_density(p)
        assert verify_pattern(moved).ok == verify_pattern(p).ok

    @given(patterns())
    def test_adding_detectors_keeps_ok(self, p):
        if not verify_pattern(p).ok:
            return
        for cell in p.cells():
            assert verify_pattern(add_detector(p, cell)).ok

    def test_hex_odd_translation(self):
        with pytest.raises(InputError):
            translate(full_pattern('hex', (2, 0), (1, 1)), (1, 0))

    def test_torus_side(self):
        p = full_pattern('sqr', (1, 0), (0, 1))
        g, _ = torus_graph(p)
        assert g.n == 144
        with pytest.raises(InputError):
            torus_graph(p, k=4)
        with pytest.raises(InputError):
            torus_graph(full_pattern('sqr', (2, 0), (0, 3)), k=16)


class TestSearch:
    def test_full_pattern_found(self):
        found = search_pattern('sqr', 1, 1)
        assert found is not None and pattern_density(found) == 1

    def test_hex_full_pattern_found(self):
        found = search_pattern('hex', 2, '1')
        assert found is not None and verify_pattern(found).ok

    def test_below_known_density(self):
        # SQR 的最优密度是 3/4，密度 1/2 的模式不存在
        assert search_pattern('sqr', 8, '1/2') is None

    def test_bad_arguments(self):
        with pytest.raises(InputError):
            search_pattern('sqr', 37, '3/4')
        with pytest.raises(InputError):
            search_pattern('sqr', 8, '3/2')

    @pytest.mark.slow
    @pytest.mark.parametrize('family, target, bound', [('sqr', '3/4', 16), ('tri', '1/2', 16), ('hex', '6/7', 28)])
    def test_known_densities(self, family, target, bound):
        found = search_pattern(family, bound, target, exact=True)
        assert found is not None
        assert pattern_density(found) == Fraction(target)
        assert verify_pattern(found).ok
        g, s = torus_graph(found)
        assert check(g, s, Level.DETOLD).ok


class TestStoredPatterns:
    @pytest.fixture(scope='class')
    def kng(self):
        return load_pattern(os.path.join(PATTERN_DIR, 'kng_13_30.json'))

    def test_kng_density(self, kng):
        assert kng.family is GridFamily.KNG
        assert kng.basis == (6, 3, 5)
        assert pattern_density(kng) == Fraction(13, 30)

    def test_kng_plane(self, kng):
        assert verify_pattern(kng).ok

    def test_kng_torus(self, kng):
        g, s = torus_graph(kng)
        assert g.n == 900
        assert len(s) == 390
        assert check(g, s, Level.DETOLD).ok

    def test_kng_translated(self, kng):
        assert verify_pattern(translate(kng, (1, 2))).ok
