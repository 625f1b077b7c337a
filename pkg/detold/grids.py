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

import logging
import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import FrozenSet, List, Optional, Set, Tuple

from tqdm import tqdm

from detold.errors import InputError
from detold.graph import Graph, VertexSet
from detold.verify import Undistinguished, UnderDominated, Verdict

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]

KING_OFFSETS = tuple((dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx, dy) != (0, 0))


class GridFamily(Enum):
    SQR = 'sqr'
    TRI = 'tri'
    KNG = 'kng'
    HEX = 'hex'

    @classmethod
    def parse(cls, value) -> 'GridFamily':
        if isinstance(value, GridFamily):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise InputError(f'Unknown grid family {value!r}; expected sqr, tri, kng or hex')

    @property
    def degree(self) -> int:
        return {'sqr': 4, 'tri': 6, 'kng': 8, 'hex': 3}[self.value]


def grid_neighbors(family: GridFamily, cell: Cell) -> Set[Cell]:
    """
    无限网格中的邻居

    HEX 采用砖墙坐标：左右相邻总在，x + y 为偶数时向上连 (x, y+1)，否则向下连 (x, y-1)
    """
    family = GridFamily.parse(family)
    x, y = cell
    if family is GridFamily.SQR:
        offsets = ((1, 0), (-1, 0), (0, 1), (0, -1))
    elif family is GridFamily.TRI:
        offsets = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1))
    elif family is GridFamily.KNG:
        offsets = KING_OFFSETS
    else:
        offsets = ((1, 0), (-1, 0), (0, 1) if (x + y) % 2 == 0 else (0, -1))
    return {(x + dx, y + dy) for dx, dy in offsets}


def ball_two(family: GridFamily, cell: Cell) -> Set[Cell]:
    ball = {cell}
    for z in grid_neighbors(family, cell):
        ball.add(z)
        ball |= grid_neighbors(family, z)
    return ball


########## 周期格 ##########

def lattice_basis(p1: Cell, p2: Cell) -> Tuple[int, int, int]:
    """
    (p1, p2) 生成的格的 Hermite 标准形基 (a, 0), (b, c)，其中 a, c > 0 且 0 <= b < a

    异常:
        InputError: 周期向量线性相关
    """
    det = p1[0] * p2[1] - p1[1] * p2[0]
    if det == 0:
        raise InputError(f'Period vectors {p1} and {p2} are linearly dependent')
    # 扩展欧几里得：u*y1 + v*y2 = c
    y1, y2 = p1[1], p2[1]
    old_r, r, old_u, u, old_v, v = y1, y2, 1, 0, 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    c, cu, cv = old_r, old_u, old_v
    if c < 0:
        c, cu, cv = -c, -cu, -cv
    a = abs(det) // c
    b = (cu * p1[0] + cv * p2[0]) % a
    return a, b, c


def reduce_cell(cell: Cell, basis: Tuple[int, int, int]) -> Cell:
    a, b, c = basis
    x, y = cell
    q = y // c
    return (x - q * b) % a, y - q * c


@dataclass(frozen=True)
class PeriodicPattern:
    """
    周期检测器模式

    参数:
        family (GridFamily): 网格类型
        p1, p2 (tuple): 周期向量
        detectors (frozenset): 基本区域内的检测器格子，构造时约化到标准代表元
    """
    family: GridFamily
    p1: Cell
    p2: Cell
    detectors: FrozenSet[Cell] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, 'family', GridFamily.parse(self.family))
        object.__setattr__(self, 'p1', tuple(int(t) for t in self.p1))
        object.__setattr__(self, 'p2', tuple(int(t) for t in self.p2))
        basis = lattice_basis(self.p1, self.p2)
        if self.family is GridFamily.HEX and any(sum(p) % 2 for p in (self.p1, self.p2)):
            raise InputError('HEX periods must have an even coordinate sum')
        reduced = frozenset(reduce_cell(tuple(cell), basis) for cell in self.detectors)
        object.__setattr__(self, 'detectors', reduced)

    @property
    def basis(self) -> Tuple[int, int, int]:
        return lattice_basis(self.p1, self.p2)

    @property
    def size(self) -> int:
        a, _, c = self.basis
        return a * c

    def cells(self) -> List[Cell]:
        a, _, c = self.basis
        return [(x, y) for y in range(c) for x in range(a)]

    def is_detector(self, cell: Cell) -> bool:
        return reduce_cell(cell, self.basis) in self.detectors


def _lex_positive(u: Cell, v: Cell) -> bool:
    return (v[0] - u[0], v[1] - u[1]) > (0, 0)


def verify_pattern(p: PeriodicPattern) -> Verdict:
    """
    在覆盖平面上检查周期模式：基本区域内每个格子至少 2 重支配，
    且与距离不超过 2 的每个格子 2# 区分；平面上不存在环绕，不需要放大周期
    """
    failures = []
    basis = p.basis

    def doms(cell):
        return {z for z in grid_neighbors(p.family, cell) if reduce_cell(z, basis) in p.detectors}

    for u in p.cells():
        du = doms(u)
        if len(du) < 2:
            failures.append(UnderDominated(u, len(du), 2))
        for v in ball_two(p.family, u):
            if not _lex_positive(u, v):
                continue
            dv = doms(v)
            have = max(len(du - dv), len(dv - du))
            if have < 2:
                failures.append(Undistinguished(u, v, 'sharp', have, 2))
    return Verdict(failures).sort()


def pattern_density(p: PeriodicPattern) -> Fraction:
    return Fraction(len(p.detectors), p.size)


def translate(p: PeriodicPattern, vector: Cell) -> PeriodicPattern:
    """平移全部检测器；HEX 只允许坐标和为偶数的平移"""
    dx, dy = vector
    if p.family is GridFamily.HEX and (dx + dy) % 2:
        raise InputError('HEX translations must have an even coordinate sum')
    return PeriodicPattern(p.family, p.p1, p.p2, frozenset((x + dx, y + dy) for x, y in p.detectors))


def add_detector(p: PeriodicPattern, cell: Cell) -> PeriodicPattern:
    return PeriodicPattern(p.family, p.p1, p.p2, p.detectors | {tuple(cell)})


def torus_graph(p: PeriodicPattern, k: Optional[int] = None) -> Tuple[Graph, VertexSet]:
    """
    显式的 k×k 环面图以及周期检测器集合，用作 verify_pattern 的参照

    k 默认取 a*c 的不小于 12 的最小倍数（a*c 的倍数总能被周期格整除）
    """
    a, _, c = p.basis
    step = a * c
    if k is None:
        k = step * max(1, -(-12 // step))
    if k % step or k < 5:
        raise InputError(f'Torus side {k} must be a multiple of {step} and at least 5')
    index = {(x, y): x * k + y for x in range(k) for y in range(k)}
    edges = set()
    for (x, y), i in index.items():
        for zx, zy in grid_neighbors(p.family, (x, y)):
            j = index[(zx % k, zy % k)]
            edges.add((min(i, j), max(i, j)))
    g = Graph.from_edges(k * k, sorted(edges))
    s = VertexSet.from_iterable(k * k, (i for cell, i in index.items() if p.is_detector(cell)))
    return g, s


########## 模式搜索 ##########

def lattices(family: GridFamily, size: int):
    """指数为 size 的全部子格（HNF 形式）"""
    family = GridFamily.parse(family)
    for a in range(1, size + 1):
        if size % a:
            continue
        c = size // a
        for b in range(a):
            if family is GridFamily.HEX and (a % 2 or (b + c) % 2):
                continue
            yield (a, 0), (b, c)


class _PatternSearch:
    """在给定周期格上按 BFS 顺序逐格决定是否放检测器，格子决定完时检查其约束"""

    def __init__(self, family: GridFamily, p1: Cell, p2: Cell, budget: int):
        self.family, self.p1, self.p2, self.budget = family, p1, p2, budget
        self.basis = lattice_basis(p1, p2)
        self.order = self._bfs_order()
        self.pos = {cell: i for i, cell in enumerate(self.order)}
        self.checks = [[] for _ in self.order]
        self._build_constraints()

    def _bfs_order(self):
        start = reduce_cell((0, 0), self.basis)
        seen, queue, order = {start}, deque([start]), []
        while queue:
            cell = queue.popleft()
            order.append(cell)
            for z in sorted(grid_neighbors(self.family, cell)):
                r = reduce_cell(z, self.basis)
                if r not in seen:
                    seen.add(r)
                    queue.append(r)
        return order

    def _nbrs(self, cell):
        return tuple((z, self.pos[reduce_cell(z, self.basis)]) for z in sorted(grid_neighbors(self.family, cell)))

    def _build_constraints(self):
        for u in self.order:
            nu = self._nbrs(u)
            self.checks[max(q for _, q in nu)].append((nu, None))
            for v in ball_two(self.family, u):
                if not _lex_positive(u, v):
                    continue
                nv = self._nbrs(v)
                last = max(q for _, q in nu + nv)
                self.checks[last].append((nu, nv))

    def _holds(self, chosen, nu, nv) -> bool:
        du = {z for z, q in nu if chosen[q]}
        if nv is None:
            return len(du) >= 2
        dv = {z for z, q in nv if chosen[q]}
        return len(du - dv) >= 2 or len(dv - du) >= 2

    def run(self, fix_origin: bool) -> Optional[FrozenSet[Cell]]:
        chosen = [False] * len(self.order)

        def step(i, used):
            if i == len(self.order):
                return True
            options = (False,) if (fix_origin and i == 0) else (True, False)
            for value in options:
                if value and used >= self.budget:
                    continue
                chosen[i] = value
                if all(self._holds(chosen, nu, nv) for nu, nv in self.checks[i]):
                    if step(i + 1, used + value):
                        return True
            chosen[i] = False
            return False

        if step(0, 0):
            return frozenset(cell for cell, on in zip(self.order, chosen) if on)
        return None


def _search_shape(family, p1, p2, budget, fix_origin):
    found = _PatternSearch(family, p1, p2, budget).run(fix_origin)
    if found is None:
        return None
    return PeriodicPattern(family, p1, p2, found)


def search_pattern(family, domain_bound: int, target, exact: bool = False, workers: int = 1) -> Optional[PeriodicPattern]:
    """
    在指数不超过 domain_bound 的周期格上搜索密度不超过 target 的模式

    参数:
        family (GridFamily/str): 网格类型
        domain_bound (int): 基本区域大小上限（不超过 36）
        target (Fraction/str): 目标密度，例如 '3/4'
        exact (bool): 只在 target * size 为整数的区域大小上搜索
        workers (int): 并行处理周期形状的进程数

    返回:
        PeriodicPattern 或 None（未找到是正常结果）
    """
    family = GridFamily.parse(family)
    target = Fraction(target)
    if domain_bound > 36:
        raise InputError(f'Domain bound {domain_bound} exceeds the search limit 36')
    if not 0 <= target <= 1:
        raise InputError(f'Target density {target} outside [0, 1]')
    shapes = []
    for size in range(1, domain_bound + 1):
        if exact and (target * size).denominator != 1:
            continue
        budget = math.floor(target * size)
        # 密度小于 1 时总有非检测器，非 HEX 网格可把它平移到原点
        fix_origin = family is not GridFamily.HEX and budget < size
        shapes.extend((family, p1, p2, budget, fix_origin) for p1, p2 in lattices(family, size))
    logger.info('Searching %d period shapes for %s at density <= %s', len(shapes), family.value, target)
    if workers == 1:
        for shape in tqdm(shapes, desc=f'Search {family.value}', leave=False):
            pattern = _search_shape(*shape)
            if pattern is not None:
                return pattern
        return None
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_search_shape, *shape) for shape in shapes]
        for future in tqdm(futures, desc=f'Search {family.value}', leave=False):
            pattern = future.result()
            if pattern is not None:
                for rest in futures:
                    rest.cancel()
                return pattern
    return None
