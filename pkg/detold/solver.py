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
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Tuple

import networkx as nx

from detold.errors import CapabilityError, InputError
from detold.graph import Graph, VertexSet
from detold.verify import Level, forced_detectors, satisfies

logger = logging.getLogger(__name__)

ORACLE_MAX_N = 22


@dataclass
class SolveResult:
    feasible: bool
    optimum: Optional[int] = None
    witness: Optional[VertexSet] = None
    nodes_explored: int = 0

    def to_dict(self):
        if not self.feasible:
            return {'feasible': False, 'nodes': self.nodes_explored}
        return {
            'feasible': True,
            'optimum': self.optimum,
            'witness': self.witness.to_list(),
            'nodes': self.nodes_explored,
        }


def solve_oracle(g: Graph, level: Level) -> SolveResult:
    """
    穷举子集的参照求解器：按大小递增、同大小按字典序枚举

    返回:
        SolveResult: 最优值以及该大小下字典序最小的见证集
    """
    level = Level.parse(level)
    if g.n > ORACLE_MAX_N:
        raise CapabilityError(f'Oracle is capped at n={ORACLE_MAX_N}, got n={g.n}')
    nodes = 0
    for k in range(g.n + 1):
        for combo in combinations(range(g.n), k):
            nodes += 1
            mask = sum(1 << v for v in combo)
            if satisfies(g, mask, level):
                return SolveResult(True, k, VertexSet(g.n, mask), nodes)
    return SolveResult(False, nodes_explored=nodes)


class BranchAndBound:
    """
    基于违例证书分支的精确求解器

    每个节点取候选修复集最小的未满足证书（欠支配的顶点或未区分的点对），
    依次尝试把候选加入 S，并在之后的分支中排除已尝试过的候选。
    """

    def __init__(self, g: Graph, level: Level):
        self.g = g
        self.level = Level.parse(level)
        self.need = self.level.dominance
        self.max_degree = max((len(nbrs) for nbrs in g.adjacency), default=1) or 1
        self.nodes = 0

    def _certificate(self, s: int, x: int) -> Optional[int]:
        """返回最小的候选修复集位串；S 已满足时返回 None，存在无法修复的证书时返回 0"""
        g, free = self.g, ~(s | x)
        doms = [m & s for m in g.masks]
        best = None
        for v, d in enumerate(doms):
            if d.bit_count() < self.need:
                cand = g.masks[v] & free
                if best is None or cand.bit_count() < best.bit_count():
                    best = cand
                    if cand == 0:
                        return 0
        for u in range(g.n):
            partners = g.balls[u] & ~((1 << (u + 1)) - 1)
            for v in VertexSet(g.n, partners):
                a, b = doms[u], doms[v]
                if self.level is Level.DETOLD:
                    fine = (a & ~b).bit_count() >= 2 or (b & ~a).bit_count() >= 2
                else:
                    fine = (a ^ b).bit_count() >= self.level.distinction
                if fine:
                    continue
                cand = (g.masks[u] ^ g.masks[v]) & free
                if best is None or cand.bit_count() < best.bit_count():
                    best = cand
                    if cand == 0:
                        return 0
        return best

    def _lower_bound(self, s: int) -> int:
        deficits = [max(0, self.need - (m & s).bit_count()) for m in self.g.masks]
        total = sum(deficits)
        if total == 0:
            return 0
        return max(max(deficits), -(-total // self.max_degree))

    def search(self, s: int, x: int, limit: int) -> Optional[int]:
        """在 S 包含 s、与 x 不相交的集合中找大小不超过 limit 的解"""
        self.nodes += 1
        size = s.bit_count()
        if size > limit:
            return None
        full = (1 << self.g.n) - 1
        if not satisfies(self.g, full & ~x, self.level):
            return None
        cand = self._certificate(s, x)
        if cand is None:
            return s
        if cand == 0 or size + max(1, self._lower_bound(s)) > limit:
            return None
        excluded = x
        for c in VertexSet(self.g.n, cand):
            found = self.search(s | (1 << c), excluded, limit)
            if found is not None:
                return found
            excluded |= 1 << c
        return None

    def lex_min_witness(self, seed: int, k: int) -> int:
        """在大小为 k 的最优解中取字典序最小者：按编号顺序能选则选"""
        include, exclude = seed, 0
        for v in range(self.g.n):
            if (include >> v) & 1:
                continue
            if include.bit_count() < k and self.search(include | (1 << v), exclude, k) is not None:
                include |= 1 << v
            else:
                exclude |= 1 << v
        return include


def solve_bb(g: Graph, level: Level) -> SolveResult:
    """
    分支定界精确求解，约定与 solve_oracle 相同

    预处理: 先用 V 判定可行性，再把强制检测器放入初始集合。
    """
    level = Level.parse(level)
    full = (1 << g.n) - 1
    if not satisfies(g, full, level):
        return SolveResult(False, nodes_explored=1)
    bb = BranchAndBound(g, level)
    seed = forced_detectors(g, level).mask
    limit = seed.bit_count() + bb._lower_bound(seed)
    while True:
        found = bb.search(seed, 0, limit)
        if found is not None:
            break
        limit += 1
    logger.debug('optimum %d after %d nodes', limit, bb.nodes)
    witness = bb.lex_min_witness(seed, limit)
    return SolveResult(True, limit, VertexSet(g.n, witness), bb.nodes)


def solve(g: Graph, level: Level, oracle: bool = False) -> SolveResult:
    return solve_oracle(g, level) if oracle else solve_bb(g, level)


########## 极值界 ##########

def min_edge_bound(n: int) -> int:
    """有 DET:OLD 的 n 顶点图的最少边数下界 ceil((3n - floor(n/2)) / 2)"""
    if n < 7:
        raise InputError(f'Graphs with a DET:OLD set have n >= 7, got n={n}')
    return (3 * n - n // 2 + 1) // 2


def deg2_neighbor_ok(g: Graph) -> bool:
    """每个顶点至多一个度为 2 的邻居"""
    deg2 = sum(1 << v for v, nbrs in enumerate(g.adjacency) if len(nbrs) == 2)
    return all((m & deg2).bit_count() <= 1 for m in g.masks)


def edge_bound_family(n: int) -> Graph:
    """
    边数恰为 min_edge_bound(n) 的构造：Möbius 梯 circulant(2r, [1, r])，
    再把若干横档细分一次或两次，补足到 n 个顶点

    参数:
        n (int): 顶点数，n >= 9

    返回:
        Graph: 新增的细分点从 2r 开始编号
    """
    if n < 9:
        raise InputError(f'The subdivided ladder family starts at n=9, got n={n}')
    r = ((n + 1) // 2 + 1) // 2
    h = 2 * r
    extra = n - h
    twice = max(0, extra - r)
    once = extra - 2 * twice
    G = nx.circulant_graph(h, [1, r])
    nxt = h
    for i in range(twice + once):
        cut = 2 if i < twice else 1
        G.remove_edge(i, i + r)
        nx.add_path(G, [i] + list(range(nxt, nxt + cut)) + [i + r])
        nxt += cut
    return Graph.from_networkx(G)


def edge_bound_witness(n: int, search: bool = False) -> Tuple[Optional[Graph], Optional[SolveResult]]:
    """
    边数恰为 min_edge_bound(n) 且 DET:OLD(G) = n 的图

    参数:
        n (int): 顶点数
        search (bool): False 时用 edge_bound_family 的构造；
            True 时在“n 圈 + 弦”的图中穷举，只适合 n <= 12 左右

    返回:
        tuple: (图, 求解结果)；找不到或构造未通过复核时为 (None, None)
    """
    m = min_edge_bound(n)
    if not search:
        g = edge_bound_family(n)
        result = solve_bb(g, Level.DETOLD)
        if g.m == m and deg2_neighbor_ok(g) and result.optimum == n:
            return g, result
        logger.warning('ladder construction failed at n=%d', n)
        return None, None
    cycle = [(i, (i + 1) % n) for i in range(n)]
    cycle_set = {tuple(sorted(e)) for e in cycle}
    chords = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in cycle_set]
    for extra in combinations(chords, m - n):
        g = Graph.from_edges(n, cycle + list(extra))
        if not deg2_neighbor_ok(g):
            continue
        if not satisfies(g, (1 << n) - 1, Level.DETOLD):
            continue
        result = solve_bb(g, Level.DETOLD)
        if result.optimum == n:
            return g, result
    return None, None
