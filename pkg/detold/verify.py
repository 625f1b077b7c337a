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

from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, List, Tuple, Union

from detold.errors import InputError, NoSolutionError
from detold.graph import Graph, VertexSet


class Level(Enum):
    OLD = 'old'
    REDOLD = 'red-old'
    DETOLD = 'det-old'

    @classmethod
    def parse(cls, value) -> 'Level':
        """接受 'det-old'、'DETOLD'、'det_old' 等写法"""
        if isinstance(value, Level):
            return value
        key = str(value).strip().lower().replace('_', '-').replace(':', '-')
        aliases = {'old': cls.OLD, 'red-old': cls.REDOLD, 'redold': cls.REDOLD,
                   'det-old': cls.DETOLD, 'detold': cls.DETOLD}
        if key not in aliases:
            raise InputError(f'Unknown level {value!r}; expected old, red-old or det-old')
        return aliases[key]

    @property
    def dominance(self) -> int:
        return 1 if self is Level.OLD else 2

    @property
    def distinction(self) -> int:
        return 1 if self is Level.OLD else 2


@dataclass(frozen=True)
class UnderDominated:
    v: Hashable
    have: int
    need: int

    @property
    def key(self):
        return (self.v,)

    def to_dict(self):
        return {'kind': 'under-dominated', 'v': self.v, 'have': self.have, 'need': self.need}


@dataclass(frozen=True)
class Undistinguished:
    u: Hashable
    v: Hashable
    kind: str  # 'plain' | 'sharp'
    have: int
    need: int

    @property
    def key(self):
        return (self.u, self.v)

    def to_dict(self):
        return {'kind': 'undistinguished', 'u': self.u, 'v': self.v, 'distinction': self.kind,
                'have': self.have, 'need': self.need}


Failure = Union[UnderDominated, Undistinguished]


@dataclass
class Verdict:
    failures: List[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def first(self):
        return self.failures[0] if self.failures else None

    def sort(self):
        self.failures.sort(key=lambda f: (f.key, isinstance(f, Undistinguished)))
        return self


def dominators(g: Graph, s: VertexSet, v: int) -> VertexSet:
    g._check_vertex(v)
    return VertexSet(g.n, g.masks[v] & s.mask)


def _pair_masks(g, s, u, v):
    if u == v:
        raise InputError(f'Pair needs distinct vertices, got {u} twice')
    g._check_vertex(u)
    g._check_vertex(v)
    return g.masks[u] & s.mask, g.masks[v] & s.mask


def k_distinguished(g: Graph, s: VertexSet, u: int, v: int, k: int) -> bool:
    a, b = _pair_masks(g, s, u, v)
    return (a ^ b).bit_count() >= k


def sharp_k_distinguished(g: Graph, s: VertexSet, u: int, v: int, k: int) -> bool:
    a, b = _pair_masks(g, s, u, v)
    return (a & ~b).bit_count() >= k or (b & ~a).bit_count() >= k


def pair_score(a: int, b: int, level: Level) -> Tuple[int, str]:
    """两个支配集位串的区分度，以及区分的种类"""
    if level is Level.DETOLD:
        return max((a & ~b).bit_count(), (b & ~a).bit_count()), 'sharp'
    return (a ^ b).bit_count(), 'plain'


def check(g: Graph, s: VertexSet, level: Level, shortcut: bool = True) -> Verdict:
    """
    按三个层级的刻画检查 S：每个顶点至少 1/2 重支配，所有点对 1/2/2# 区分

    参数:
        g (Graph): 图
        s (VertexSet): 检测器集合
        level (Level): OLD / REDOLD / DETOLD
        shortcut (bool): 是否跳过邻域不相交且都已充分支配的点对；
            False 时逐对检查，作为测试中的参照实现

    返回:
        Verdict: 列出全部违例，按顶点编号字典序排列
    """
    level = Level.parse(level)
    if s.n != g.n:
        raise InputError(f'Detector set universe {s.n} does not match graph size {g.n}')
    need_dom, need_dist = level.dominance, level.distinction
    doms = [m & s.mask for m in g.masks]
    failures = []
    weak = 0
    for v, d in enumerate(doms):
        have = d.bit_count()
        if have < need_dom:
            failures.append(UnderDominated(v, have, need_dom))
            weak |= 1 << v

    everyone = (1 << g.n) - 1
    for u in range(g.n):
        if shortcut and not (weak >> u) & 1:
            # 距离 >= 3 的点对邻域不相交，两边都充分支配时自动区分
            partners = g.balls[u] | weak
        else:
            partners = everyone
        partners &= ~((1 << (u + 1)) - 1)
        for v in VertexSet(g.n, partners):
            have, kind = pair_score(doms[u], doms[v], level)
            if have < need_dist:
                failures.append(Undistinguished(u, v, kind, have, need_dist))
    return Verdict(failures).sort()


def is_level_set(g: Graph, s: VertexSet, level: Level) -> bool:
    return check(g, s, level).ok


def forced_detectors(g: Graph, level: Level) -> VertexSet:
    """
    属于每一个该层级检测集的顶点：{v : V - {v} 不满足条件}

    异常:
        NoSolutionError: V 本身都不满足条件时，该层级的集合不存在
    """
    level = Level.parse(level)
    full = VertexSet.full(g.n)
    if not check(g, full, level).ok:
        raise NoSolutionError(f'No {level.value} set exists on this graph')
    forced = 0
    for v in range(g.n):
        if not satisfies(g, full.mask & ~(1 << v), level):
            forced |= 1 << v
    return VertexSet(g.n, forced)


def satisfies(g: Graph, mask: int, level: Level) -> bool:
    """check(...).ok 的快速版本：位串输入，遇到第一个违例立即返回"""
    need_dom, need_dist = level.dominance, level.distinction
    doms = [m & mask for m in g.masks]
    if any(d.bit_count() < need_dom for d in doms):
        return False
    for u in range(g.n):
        partners = g.balls[u] & ~((1 << (u + 1)) - 1)
        du = doms[u]
        while partners:
            low = partners & -partners
            partners ^= low
            dv = doms[low.bit_length() - 1]
            if level is Level.DETOLD:
                if (du & ~dv).bit_count() < 2 and (dv & ~du).bit_count() < 2:
                    return False
            elif (du ^ dv).bit_count() < need_dist:
                return False
    return True
