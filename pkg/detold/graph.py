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
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Callable, Iterable, Iterator, Optional, Tuple

import networkx as nx
import numpy as np

from detold.errors import CapabilityError, InputError

logger = logging.getLogger(__name__)

MAX_ENUMERATION_N = 8


@dataclass(frozen=True)
class VertexSet:
    """
    固定全集 {0..n-1} 上的顶点集合，内部用 Python 大整数做位集

    并、交、差、对称差都是按机器字并行的位运算。
    """
    n: int
    mask: int = 0

    @classmethod
    def from_iterable(cls, n: int, members: Iterable[int]) -> 'VertexSet':
        mask = 0
        for v in members:
            if not 0 <= v < n:
                raise InputError(f'Vertex {v} out of range for n={n}')
            mask |= 1 << v
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> 'VertexSet':
        return cls(n, (1 << n) - 1)

    @classmethod
    def empty(cls, n: int) -> 'VertexSet':
        return cls(n, 0)

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise InputError(f'Members outside universe of size {self.n}')

    def __len__(self):
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __contains__(self, v):
        return 0 <= v < self.n and (self.mask >> v) & 1 == 1

    def _other(self, other):
        if isinstance(other, VertexSet):
            if other.n != self.n:
                raise InputError(f'Universe mismatch: {self.n} vs {other.n}')
            return other.mask
        return VertexSet.from_iterable(self.n, other).mask

    def __or__(self, other):
        return VertexSet(self.n, self.mask | self._other(other))

    def __and__(self, other):
        return VertexSet(self.n, self.mask & self._other(other))

    def __sub__(self, other):
        return VertexSet(self.n, self.mask & ~self._other(other))

    def __xor__(self, other):
        return VertexSet(self.n, self.mask ^ self._other(other))

    def complement(self) -> 'VertexSet':
        return VertexSet(self.n, ((1 << self.n) - 1) & ~self.mask)

    def issubset(self, other) -> bool:
        return self.mask & ~self._other(other) == 0

    def to_list(self):
        return list(self)

    def __repr__(self):
        return f'VertexSet({self.to_list()})'


@dataclass(frozen=True)
class TrailSet:
    origin: int
    length: int
    members: VertexSet

    def __contains__(self, v):
        return v in self.members

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class Graph:
    """
    有限简单无向图，顶点为 0..n-1

    参数:
        n (int): 顶点数
        adjacency (tuple): 每个顶点排序后的邻居元组
        labels (tuple, 可选): 外部标签，输出时用于回译
    """
    n: int
    adjacency: Tuple[Tuple[int, ...], ...]
    labels: Optional[Tuple] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.adjacency) != self.n:
            raise InputError(f'Adjacency has {len(self.adjacency)} rows, expected {self.n}')
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise InputError(f'Neighbors of {v} must be sorted and duplicate-free')
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise InputError(f'Neighbor {u} of {v} out of range')
                if u == v:
                    raise InputError(f'Self-loop at {v}')
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if v not in self.adjacency[u]:
                    raise InputError(f'Asymmetric adjacency between {v} and {u}')

    # 构造 ------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]], labels=None) -> 'Graph':
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f'Edge ({u}, {v}) out of range for n={n}')
            if u == v:
                raise InputError(f'Self-loop at {u}')
            if v in nbrs[u]:
                raise InputError(f'Duplicate edge ({u}, {v})')
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), labels)

    @classmethod
    def from_networkx(cls, G: nx.Graph) -> 'Graph':
        nodes = list(G.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        edges = [(index[u], index[v]) for u, v in G.edges() if u != v]
        return cls.from_edges(len(nodes), edges, labels=tuple(nodes))

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges())
        return G

    @classmethod
    def from_graph6(cls, text: str) -> 'Graph':
        g = cls.from_networkx(nx.from_graph6_bytes(text.strip().encode('ascii')))
        return cls(g.n, g.adjacency)

    def to_graph6(self) -> str:
        return nx.to_graph6_bytes(self.to_networkx(), header=False).decode('ascii').strip()

    # 基本量 ------------------------------------------------
    @cached_property
    def masks(self) -> Tuple[int, ...]:
        return tuple(sum(1 << u for u in nbrs) for nbrs in self.adjacency)

    @cached_property
    def m(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def edges(self):
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def label(self, v):
        return self.labels[v] if self.labels is not None else v

    def adjacency_matrix(self) -> np.ndarray:
        mat = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.edges():
            mat[u, v] = mat[v, u] = 1
        return mat

    def _check_vertex(self, v):
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.n:
            raise InputError(f'Vertex {v} out of range for n={self.n}')

    def distance_two_ball(self, v: int) -> int:
        """距离 v 不超过 2 的顶点位集（含 v 本身）"""
        ball = self.masks[v] | (1 << v)
        for u in self.adjacency[v]:
            ball |= self.masks[u]
        return ball

    @cached_property
    def balls(self) -> Tuple[int, ...]:
        return tuple(self.distance_two_ball(v) for v in range(self.n))

    def is_cubic(self) -> bool:
        return self.n > 0 and all(len(nbrs) == 3 for nbrs in self.adjacency)


def open_neighborhood(g: Graph, v: int) -> VertexSet:
    g._check_vertex(v)
    return VertexSet(g.n, g.masks[v])


def closed_neighborhood(g: Graph, v: int) -> VertexSet:
    g._check_vertex(v)
    return VertexSet(g.n, g.masks[v] | (1 << v))


def degree(g: Graph, v: int) -> int:
    g._check_vertex(v)
    return len(g.adjacency[v])


def min_degree(g: Graph) -> int:
    return min((len(nbrs) for nbrs in g.adjacency), default=0)


def trail_set(g: Graph, v: int, k: int) -> TrailSet:
    """
    计算 T_k(v)：与 v 之间存在恰好 k 条边的迹（边不重复、顶点可重复）的顶点集合

    参数:
        g (Graph): 图
        v (int): 起点
        k (int): 迹长度，只支持 0、2、4

    返回:
        TrailSet: 闭迹的终点 v 本身也会被记录；cubic 模块只使用不同端点
    """
    g._check_vertex(v)
    if k not in (0, 2, 4):
        raise InputError(f'Unsupported trail length {k}; expected 0, 2 or 4')
    if k == 0:
        return TrailSet(v, 0, VertexSet(g.n, 1 << v))

    found = 0
    stack = [(v, frozenset())]
    while stack:
        x, used = stack.pop()
        if len(used) == k:
            found |= 1 << x
            continue
        for y in g.adjacency[x]:
            edge = (x, y) if x < y else (y, x)
            if edge not in used:
                stack.append((y, used | {edge}))
    return TrailSet(v, k, VertexSet(g.n, found))


def is_c4_free(g: Graph) -> bool:
    # 等价于任意两点至多一个公共邻居
    masks = g.masks
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if (masks[u] & masks[v]).bit_count() >= 2:
                return False
    return True


def disjoint_union(*graphs: Graph) -> Graph:
    edges, offset = [], 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return Graph.from_edges(offset, edges)


def named_graph(name: str, n: Optional[int] = None) -> Graph:
    """按名字构造常用测试图（petersen, heawood, k4, k33, cycle, path, complete）"""
    builders = {
        'petersen': lambda: nx.petersen_graph(),
        'heawood': lambda: nx.heawood_graph(),
        'k4': lambda: nx.complete_graph(4),
        'k33': lambda: nx.complete_bipartite_graph(3, 3),
        'cycle': lambda: nx.cycle_graph(n),
        'path': lambda: nx.path_graph(n),
        'complete': lambda: nx.complete_graph(n),
    }
    if name not in builders:
        raise InputError(f'Unknown graph name {name}')
    if name in ('cycle', 'path', 'complete') and n is None:
        raise InputError(f'Graph {name} needs n')
    g = Graph.from_networkx(builders[name]())
    return Graph(g.n, g.adjacency)


########## 同构类枚举 ##########

def _refine(masks, cells):
    # 按到各单元的邻居数细分，直到稳定；单元顺序只依赖于划分本身
    while True:
        cell_masks = [sum(1 << v for v in cell) for cell in cells]
        new_cells, changed = [], False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {v: tuple((masks[v] & cm).bit_count() for cm in cell_masks) for v in cell}
            keys = sorted(set(sig.values()))
            if len(keys) > 1:
                changed = True
            for key in keys:
                new_cells.append([v for v in cell if sig[v] == key])
        cells = new_cells
        if not changed:
            return cells


def canonical_form(g: Graph) -> bytes:
    """
    规范邻接矩阵：在细分-个体化搜索树的所有叶子上取上三角位串的最小值

    孪生顶点互换是自同构，所以同一单元中只对每个孪生类展开一次。
    """
    n = g.n
    if n == 0:
        return b'\x00'
    masks = g.masks
    mat = g.adjacency_matrix()
    upper = np.triu_indices(n, 1)
    best = [None]

    def leaf(order):
        bits = mat[np.ix_(order, order)][upper]
        key = bytes([n]) + np.packbits(bits).tobytes()
        if best[0] is None or key < best[0]:
            best[0] = key

    def search(cells):
        cells = _refine(masks, cells)
        target = next((i for i, cell in enumerate(cells) if len(cell) > 1), None)
        if target is None:
            leaf([cell[0] for cell in cells])
            return
        cell = cells[target]
        reps = []
        for v in cell:
            if any((masks[u] & ~(1 << v)) == (masks[v] & ~(1 << u)) for u in reps):
                continue
            reps.append(v)
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search([list(range(n))])
    return best[0]


@lru_cache(maxsize=None)
def _representatives(n: int) -> Tuple[Graph, ...]:
    if n == 0:
        return (Graph(0, ()),)
    reps = {}
    for base in _representatives(n - 1):
        base_edges = base.edges()
        for r in range(n):
            for nbrs in combinations(range(n - 1), r):
                g = Graph.from_edges(n, base_edges + [(u, n - 1) for u in nbrs])
                reps.setdefault(canonical_form(g), g)
    logger.debug('n=%d: %d isomorphism classes', n, len(reps))
    return tuple(reps[key] for key in sorted(reps))


def enumerate_graphs(n: int, filter: Optional[Callable[[Graph], bool]] = None) -> Iterator[Graph]:
    """
    逐个产出 n 个顶点的非同构图（每个同构类一个代表）

    参数:
        n (int): 顶点数，最多 8
        filter (callable, 可选): 只产出满足谓词的图

    异常:
        CapabilityError: n 过大时应改用 graph6 语料文件
    """
    if n < 0:
        raise InputError(f'n must be non-negative, got {n}')
    if n > MAX_ENUMERATION_N:
        raise CapabilityError(
            f'Full enumeration is capped at n={MAX_ENUMERATION_N}; '
            f'load a graph6 corpus file for n={n} instead')
    for g in _representatives(n):
        if filter is None or filter(g):
            yield g


def is_connected(g: Graph) -> bool:
    # networkx 对空图抛 NetworkXPointlessConcept
    return g.n == 0 or nx.is_connected(g.to_networkx())
