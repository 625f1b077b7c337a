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
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple

import pandas as pd
from tqdm import tqdm

from detold.errors import InputError
from detold.graph import Graph, VertexSet, is_c4_free, trail_set
from detold.solver import SolveResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConflictGraph:
    """u ~ v 当且仅当 u ∈ T2(v) ∪ T4(v)（u ≠ v）"""
    base: Graph
    masks: Tuple[int, ...]

    @property
    def n(self):
        return self.base.n

    def degree(self, v: int) -> int:
        return self.masks[v].bit_count()

    def is_independent(self, members: VertexSet) -> bool:
        return all(self.masks[v] & members.mask == 0 for v in members)


def conflict_degree(cg: ConflictGraph, v: int) -> int:
    cg.base._check_vertex(v)
    return cg.degree(v)


def _require_cubic(g: Graph):
    if not g.is_cubic():
        raise InputError('Input graph is not cubic')


def _require_c4_free_cubic(g: Graph):
    _require_cubic(g)
    if not is_c4_free(g):
        raise InputError('Input cubic graph contains a 4-cycle')


def cubic_has_detold(g: Graph) -> bool:
    _require_cubic(g)
    return is_c4_free(g)


def build_conflict_graph(g: Graph) -> ConflictGraph:
    _require_c4_free_cubic(g)
    masks = []
    for v in range(g.n):
        reach = trail_set(g, v, 2).members.mask | trail_set(g, v, 4).members.mask
        masks.append(reach & ~(1 << v))
    return ConflictGraph(g, tuple(masks))


def is_detold_cubic(g: Graph, s: VertexSet) -> bool:
    """S 是 DET:OLD 当且仅当 G 无 C4 且 V - S 在冲突图中独立"""
    _require_cubic(g)
    if not is_c4_free(g):
        return False
    return build_conflict_graph(g).is_independent(s.complement())


def max_independent_set(cg: ConflictGraph) -> int:
    """冲突图的精确最大独立集（位串），对最高度顶点分支"""
    memo = {}

    def solve(mask: int) -> int:
        if mask == 0:
            return 0
        if mask in memo:
            return memo[mask]
        best_v, best_deg = -1, -1
        for v in VertexSet(cg.n, mask):
            deg = (cg.masks[v] & mask).bit_count()
            if deg <= 1:
                # 度 <= 1 的顶点总可以放进某个最大独立集
                result = (1 << v) | solve(mask & ~(cg.masks[v] | (1 << v)))
                memo[mask] = result
                return result
            if deg > best_deg:
                best_v, best_deg = v, deg
        v = best_v
        take = (1 << v) | solve(mask & ~(cg.masks[v] | (1 << v)))
        skip = solve(mask & ~(1 << v))
        result = take if take.bit_count() >= skip.bit_count() else skip
        memo[mask] = result
        return result

    return solve((1 << cg.n) - 1)


def detold_min_cubic(g: Graph) -> SolveResult:
    """DET:OLD(G) = n - α(冲突图)"""
    cg = build_conflict_graph(g)
    independent = max_independent_set(cg)
    witness = VertexSet(g.n, ((1 << g.n) - 1) & ~independent)
    return SolveResult(True, len(witness), witness, nodes_explored=0)


def greedy_density_bound(g: Graph) -> Tuple[VertexSet, Fraction]:
    """
    按编号升序贪心地扩充非检测器集合，直到它在冲突图中成为极大独立集

    返回:
        tuple: (检测器集合 S, 密度 |S|/n)，密度不超过 30/31
    """
    cg = build_conflict_graph(g)
    sbar = 0
    for v in range(g.n):
        if cg.masks[v] & sbar == 0:
            sbar |= 1 << v
    s = VertexSet(g.n, ((1 << g.n) - 1) & ~sbar)
    return s, Fraction(len(s), g.n)


########## 语料扫描 ##########

def _scan_one(g: Graph) -> Optional[Tuple[int, int, str]]:
    if not g.is_cubic() or not is_c4_free(g):
        return None
    return g.n, detold_min_cubic(g).optimum, g.to_graph6()


def extremal_scan(corpus: Iterable[Graph], n_filter=None, workers: int = 1) -> Tuple[pd.DataFrame, int]:
    """
    对立方图语料逐图求 DET:OLD(G)，按 n 汇总最大密度

    参数:
        corpus: 图的可迭代对象
        n_filter (int/列表, 可选): 只统计这些顶点数
        workers (int): 进程数

    返回:
        tuple: (DataFrame[n, graphs, optimum, density, witness], 跳过的图数)
    """
    if n_filter is not None and not isinstance(n_filter, (list, tuple, set)):
        n_filter = [n_filter]
    graphs = [g for g in corpus if n_filter is None or g.n in n_filter]
    rows, skipped = [], 0
    if workers == 1:
        outputs = [_scan_one(g) for g in tqdm(graphs, desc='Scanning corpus', disable=len(graphs) < 2)]
    else:
        with tqdm(total=len(graphs), desc='Scanning corpus') as pbar:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                futures = {executor.submit(_scan_one, g): i for i, g in enumerate(graphs)}
                slots = [None] * len(graphs)
                for future in as_completed(futures):
                    slots[futures[future]] = future.result()
                    pbar.update(1)
        outputs = slots
    best = {}
    counts = {}
    for out in outputs:
        if out is None:
            skipped += 1
            continue
        n, optimum, g6 = out
        counts[n] = counts.get(n, 0) + 1
        density = Fraction(optimum, n)
        if n not in best or density > best[n][1]:
            best[n] = (optimum, density, g6)
    if skipped:
        logger.warning('Skipped %d graphs that are not C4-free cubic', skipped)
    for n in sorted(best):
        optimum, density, g6 = best[n]
        rows.append({'n': n, 'graphs': counts[n], 'optimum': optimum, 'density': density, 'witness': g6})
    return pd.DataFrame(rows, columns=['n', 'graphs', 'optimum', 'density', 'witness']), skipped
