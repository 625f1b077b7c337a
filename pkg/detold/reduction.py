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
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
from tqdm import tqdm

from detold.errors import CertificationError, ConstructionError, InputError
from detold.graph import Graph, VertexSet, named_graph
from detold.verify import Level, check, forced_detectors, satisfies

logger = logging.getLogger(__name__)

LABELS = ('a', 'b', 'c', 'd', 'e', 'f')
ATTACHMENTS = ('a', 'b', 'd')

# 强制子图：c、e、f 只与子图内部相连，外部边只能接在 a、b、d 上
GADGET_EDGES = (
    ('a', 'b'), ('a', 'c'), ('b', 'c'), ('b', 'd'), ('c', 'd'),
    ('c', 'e'), ('d', 'e'), ('d', 'f'), ('e', 'f'),
)

# 变量 i 的两个文字顶点与其子图之间的 5 条边（x 即 x_i，xbar 即 x̄_i）
VARIABLE_WIRING = (
    ('x', 'a'), ('x', 'b'), ('x', 'xbar'), ('xbar', 'b'), ('xbar', 'd'),
)

Literal = Tuple[int, bool]


@dataclass(frozen=True)
class SatInstance:
    """
    3-CNF 公式

    参数:
        num_vars (int): 变量数 N，变量编号 0..N-1
        clauses (tuple): M 个子句，每个子句是 3 个 (变量, 极性) 文字，变量两两不同
    """
    num_vars: int
    clauses: Tuple[Tuple[Literal, ...], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise InputError(f'Formula needs at least one variable, got {self.num_vars}')
        if not self.clauses:
            raise InputError('Formula needs at least one clause')
        for j, clause in enumerate(self.clauses):
            if len(clause) != 3:
                raise InputError(f'Clause {j + 1} has {len(clause)} literals, expected 3')
            variables = [var for var, _ in clause]
            if len(set(variables)) != 3:
                raise InputError(f'Clause {j + 1} repeats a variable; literals must come from distinct variables')
            for var in variables:
                if not 0 <= var < self.num_vars:
                    raise InputError(f'Clause {j + 1} uses variable {var + 1} outside 1..{self.num_vars}')

    @classmethod
    def from_dimacs_clauses(cls, num_vars: int, clauses: Sequence[Sequence[int]]) -> 'SatInstance':
        """DIMACS 风格的有符号整数子句（从 1 开始编号）"""
        converted = []
        for clause in clauses:
            if any(lit == 0 for lit in clause):
                raise InputError('Literal 0 is not allowed inside a clause')
            converted.append(tuple((abs(lit) - 1, lit > 0) for lit in clause))
        return cls(num_vars, tuple(converted))

    def to_dimacs_clauses(self) -> List[List[int]]:
        return [[(var + 1) if positive else -(var + 1) for var, positive in clause] for clause in self.clauses]

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def is_satisfied(phi: SatInstance, assign: Sequence[bool]) -> bool:
    return all(any(assign[var] == positive for var, positive in clause) for clause in phi.clauses)


def satisfying_assignments(phi: SatInstance) -> List[Tuple[bool, ...]]:
    """真值表枚举，按 (F, T) 顺序"""
    return [assign for assign in product((False, True), repeat=phi.num_vars) if is_satisfied(phi, assign)]


def enumerate_small_formulas(n_vars: int, n_clauses: int, up_to_polarity: bool = False) -> List[SatInstance]:
    """
    枚举 n_vars 个变量、n_clauses 个不同子句的全部 3-CNF 公式（子句无序）

    参数:
        up_to_polarity (bool): 为 True 时把整体翻转若干变量极性后相同的公式视为一类
    """
    all_clauses = []
    for variables in combinations(range(n_vars), 3):
        for signs in product((True, False), repeat=3):
            all_clauses.append(tuple(zip(variables, signs)))
    seen, formulas = set(), []
    for chosen in combinations(all_clauses, n_clauses):
        if up_to_polarity:
            key = min(
                tuple(sorted(tuple((var, positive != flip[var]) for var, positive in clause) for clause in chosen))
                for flip in product((False, True), repeat=n_vars)
            )
            if key in seen:
                continue
            seen.add(key)
        formulas.append(SatInstance(n_vars, tuple(chosen)))
    return formulas


########## G6 子图 ##########

@dataclass(frozen=True)
class GadgetG6:
    edges: Tuple[Tuple[str, str], ...]
    attachments: Tuple[str, ...] = ATTACHMENTS

    def neighbors(self, label: str):
        return sorted({v for u, v in self.edges if u == label} | {u for u, v in self.edges if v == label})


def _gadget_well_formed(cand: GadgetG6) -> bool:
    if tuple(sorted(cand.attachments)) != ATTACHMENTS:
        return False
    keys = set()
    for u, v in cand.edges:
        if u not in LABELS or v not in LABELS or u == v:
            return False
        keys.add(frozenset((u, v)))
    return len(keys) == len(cand.edges)


def _harness(cand: GadgetG6, attach_b: bool = True):
    """把候选子图的 a、b、d 各接到一份 Petersen 图上"""
    petersen = named_graph('petersen')
    edges = [(LABELS.index(u), LABELS.index(v)) for u, v in cand.edges]
    ports = {}
    offset = 6
    for label in ATTACHMENTS:
        if label == 'b' and not attach_b:
            continue
        edges.extend((u + offset, v + offset) for u, v in petersen.edges())
        edges.append((LABELS.index(label), offset))
        ports[label] = offset
        offset += petersen.n
    return Graph.from_edges(offset, edges), ports


def validate_gadget(cand: GadgetG6, formulas: Optional[List[SatInstance]] = None) -> bool:
    """
    检查候选子图的强制性质，全部只用 V 的单调性判定

    先在外挂 Petersen 的测试宿主上检查，再把候选子图放进真实的变量和子句位置：
    对 formulas 中每个公式构造归约实例，要求全部子图顶点被强制且证书检查通过。

    参数:
        cand (GadgetG6): 候选子图
        formulas (list): 归约上下文，默认是 3 个变量单个子句的全部 8 个公式

    返回:
        bool: 六个顶点都被强制、b 必须有外部检测器、a 和 d 不需要外部检测器，
            且在每个归约上下文中都成立时为 True
    """
    if not _gadget_well_formed(cand):
        return False
    host, ports = _harness(cand)
    full = (1 << host.n) - 1
    if not satisfies(host, full, Level.DETOLD):
        return False
    forced = forced_detectors(host, Level.DETOLD)
    if not all(v in forced for v in range(6)):
        return False
    if satisfies(host, full & ~(1 << ports['b']), Level.DETOLD):
        return False
    if not satisfies(host, full & ~(1 << ports['a']) & ~(1 << ports['d']), Level.DETOLD):
        return False
    bare, _ = _harness(cand, attach_b=False)
    if satisfies(bare, (1 << bare.n) - 1, Level.DETOLD):
        return False
    if formulas is None:
        formulas = enumerate_small_formulas(3, 1)
    return all(_instance_certifies(phi, gadget=cand.edges) for phi in formulas)


def derive_gadget() -> GadgetG6:
    """
    穷举 6 顶点 9 边的带标签图，保留 f 无外部边且 N(f) = {d, e} 的候选，
    用 validate_gadget 过滤后取字典序最小的边集；结果就是 build_instance 默认使用的 GADGET_EDGES
    """
    slots = list(combinations(LABELS, 2))
    for chosen in tqdm(combinations(slots, 9), desc='Deriving gadget', total=5005, leave=False):
        cand = GadgetG6(tuple(chosen))
        if cand.neighbors('f') != ['d', 'e']:
            continue
        if validate_gadget(cand):
            return cand
    raise ConstructionError('No six-vertex gadget satisfies the forcing checks')


########## 归约实例 ##########

@dataclass(frozen=True)
class Role:
    """顶点在归约实例中的角色"""
    kind: str  # 'literal' | 'variable-gadget' | 'clause-gadget'
    index: int
    label: str  # 'x' / 'xbar' 或 a..f

    @property
    def name(self) -> str:
        if self.kind == 'literal':
            return f"{'~' if self.label == 'xbar' else ''}x{self.index + 1}"
        if self.kind == 'clause-gadget' and self.label == 'b':
            return f'y{self.index + 1}'
        prefix = 'F' if self.kind == 'variable-gadget' else 'H'
        return f'{prefix}{self.index + 1}.{self.label}'

    def to_dict(self):
        return {'kind': self.kind, 'index': self.index + 1, 'label': self.label, 'name': self.name}


@dataclass(frozen=True)
class ReductionArtifact:
    formula: SatInstance
    graph: Graph
    K: int
    roles: Tuple[Role, ...]
    wiring: Tuple[Tuple[str, str], ...] = VARIABLE_WIRING

    def literal_vertex(self, var: int, positive: bool) -> int:
        return 8 * var + (0 if positive else 1)

    def clause_vertex(self, j: int) -> int:
        return 8 * self.formula.num_vars + 6 * j + LABELS.index('b')

    def gadget_vertices(self) -> VertexSet:
        return VertexSet.from_iterable(
            self.graph.n, (v for v, role in enumerate(self.roles) if role.kind != 'literal'))

    def role_map(self) -> Dict[int, dict]:
        return {v: role.to_dict() for v, role in enumerate(self.roles)}


def build_instance(phi: SatInstance, wiring=VARIABLE_WIRING, gadget=GADGET_EDGES) -> ReductionArtifact:
    """
    由 3-CNF 公式构造 DET:OLD 实例

    变量 i 占用顶点 8i（x_i）、8i+1（x̄_i）和 8i+2..8i+7（子图 a..f）；
    子句 j 占用 8N+6j..8N+6j+5，其中 b 顶点即 y_j。

    返回:
        ReductionArtifact: |V| = 8N + 6M，|E| = 16N + 12M，K = 7N + 6M
    """
    n_vars, n_clauses = phi.num_vars, phi.num_clauses
    if n_vars < 3:
        raise InputError(f'The cyclic variable chain needs N >= 3, got N={n_vars}')
    roles, edges = [], []
    for i in range(n_vars):
        roles.append(Role('literal', i, 'x'))
        roles.append(Role('literal', i, 'xbar'))
        roles.extend(Role('variable-gadget', i, label) for label in LABELS)
        local = {'x': 8 * i, 'xbar': 8 * i + 1}
        local.update({label: 8 * i + 2 + k for k, label in enumerate(LABELS)})
        edges.extend((local[u], local[v]) for u, v in gadget)
        edges.extend((local[u], local[v]) for u, v in wiring)
    for i in range(n_vars):
        k = (i + 1) % n_vars
        edges.append((8 * i + 1, 8 * k))
        edges.append((8 * i + 1, 8 * k + 1))
    base = 8 * n_vars
    for j, clause in enumerate(phi.clauses):
        roles.extend(Role('clause-gadget', j, label) for label in LABELS)
        local = {label: base + 6 * j + k for k, label in enumerate(LABELS)}
        edges.extend((local[u], local[v]) for u, v in gadget)
        for var, positive in clause:
            edges.append((local['b'], 8 * var + (0 if positive else 1)))
    graph = Graph.from_edges(len(roles), edges, labels=tuple(role.name for role in roles))
    art = ReductionArtifact(phi, graph, 7 * n_vars + 6 * n_clauses, tuple(roles), tuple(wiring))
    logger.debug('built instance with %d vertices, %d edges, K=%d', graph.n, graph.m, art.K)
    return art


def assignment_to_set(art: ReductionArtifact, assign: Sequence[bool]) -> VertexSet:
    """
    真值赋值 -> 检测集：全部子图顶点加上每个变量取真的那个文字

    异常:
        CertificationError: 得到的集合未通过 DET:OLD 验证（赋值不满足公式）
    """
    if len(assign) != art.formula.num_vars:
        raise InputError(f'Assignment has {len(assign)} values, expected {art.formula.num_vars}')
    chosen = art.gadget_vertices().mask
    for var, value in enumerate(assign):
        chosen |= 1 << art.literal_vertex(var, bool(value))
    s = VertexSet(art.graph.n, chosen)
    verdict = check(art.graph, s, Level.DETOLD)
    if not verdict.ok:
        raise CertificationError(f'Assignment does not certify: {verdict.first()}')
    return s


def set_to_assignment(art: ReductionArtifact, s: VertexSet) -> Tuple[bool, ...]:
    if len(s) > art.K:
        raise InputError(f'Set has {len(s)} vertices, more than K={art.K}')
    verdict = check(art.graph, s, Level.DETOLD)
    if not verdict.ok:
        raise InputError(f'Set is not a DET:OLD set: {verdict.first()}')
    assign = tuple(art.literal_vertex(var, True) in s for var in range(art.formula.num_vars))
    if not is_satisfied(art.formula, assign):
        raise CertificationError('Recovered assignment does not satisfy the formula')
    return assign


def check_gadget_locality(art: ReductionArtifact) -> bool:
    """
    结构检查：子图的 c、e、f 只与本子图相邻，且不同子图的非接口顶点之间距离至少为 3
    """
    owner = {}
    for v, role in enumerate(art.roles):
        if role.kind != 'literal':
            owner[v] = (role.kind, role.index)
    G = art.graph.to_networkx()
    inner = [v for v, role in enumerate(art.roles) if role.kind != 'literal' and role.label not in ATTACHMENTS]
    for v in inner:
        if any(owner.get(u) != owner[v] for u in G.neighbors(v)):
            return False
        near = nx.single_source_shortest_path_length(G, v, cutoff=2)
        if any(u in owner and owner[u] != owner[v] for u in near):
            return False
    for u, v in G.edges():
        if u in owner and v in owner and owner[u] != owner[v]:
            return False
    return True


def _instance_certifies(phi: SatInstance, wiring=VARIABLE_WIRING, gadget=GADGET_EDGES) -> bool:
    """归约实例上的证书检查：子图顶点全被强制、每对文字和每个子句的文字都不能全删、满足赋值都能认证"""
    art = build_instance(phi, wiring=wiring, gadget=gadget)
    g, full = art.graph, (1 << art.graph.n) - 1
    if not satisfies(g, full, Level.DETOLD):
        return False
    if not art.gadget_vertices().issubset(forced_detectors(g, Level.DETOLD)):
        return False
    for var in range(phi.num_vars):
        pair = (1 << art.literal_vertex(var, True)) | (1 << art.literal_vertex(var, False))
        if satisfies(g, full & ~pair, Level.DETOLD):
            return False
    for clause in phi.clauses:
        lits = sum(1 << art.literal_vertex(var, positive) for var, positive in clause)
        if satisfies(g, full & ~lits, Level.DETOLD):
            return False
    for assign in satisfying_assignments(phi):
        try:
            assignment_to_set(art, assign)
        except CertificationError:
            return False
    return True


def derive_wirings(formulas: Optional[List[SatInstance]] = None) -> List[Tuple[Tuple[str, str], ...]]:
    """
    枚举含 x-b 与 x̄-b 的全部 5 边接线，保留在测试公式上通过全部证书检查者

    返回:
        list: 按字典序排列的合格接线
    """
    if formulas is None:
        formulas = enumerate_small_formulas(3, 1) + enumerate_small_formulas(4, 2, up_to_polarity=True)[:6]
    optional = [('x', 'a'), ('x', 'd'), ('x', 'xbar'), ('xbar', 'a'), ('xbar', 'd')]
    passing = []
    for extra in combinations(optional, 3):
        wiring = tuple(sorted(extra + (('x', 'b'), ('xbar', 'b'))))
        if all(_instance_certifies(phi, wiring=wiring) for phi in formulas):
            passing.append(wiring)
    if not passing:
        raise ConstructionError('No literal wiring passes the certification checks')
    logger.info('%d literal wirings pass', len(passing))
    return sorted(passing)
