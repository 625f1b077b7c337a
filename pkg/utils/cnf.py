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

from detold.errors import InputError, ParseError
from detold.reduction import SatInstance
from utils.graph_io import read_source


def parse_cnf(source) -> SatInstance:
    """
    读取 DIMACS CNF 并校验为 3-SAT：每个子句恰好 3 个来自不同变量的文字

    参数:
        source: 文件路径或文本

    返回:
        SatInstance: 变量编号转为从 0 开始
    """
    text = read_source(source)
    num_vars, num_clauses = None, None
    clauses, pending = [], []
    offset = 0
    for lineno, raw in enumerate(text.splitlines(keepends=True), start=1):
        line = raw.strip()
        here = offset
        offset += len(raw.encode('utf-8'))
        if not line or line[0] in 'c%':
            continue
        if line[0] == 'p':
            fields = line[1:].split()
            if num_vars is not None:
                raise ParseError('Repeated header line', line=lineno, position=here)
            if len(fields) != 3 or fields[0] != 'cnf':
                raise ParseError(f"Bad header line '{line}', expected 'p cnf N M'", line=lineno, position=here)
            try:
                num_vars, num_clauses = int(fields[1]), int(fields[2])
            except ValueError:
                raise ParseError(f"Bad header line '{line}', invalid counts", line=lineno, position=here)
            continue
        if num_vars is None:
            raise ParseError('Clause before header line', line=lineno, position=here)
        try:
            lits = [int(t) for t in line.split()]
        except ValueError:
            raise ParseError('Non-integer field', line=lineno, position=here)
        # 子句可以跨行，以 0 结束
        for lit in lits:
            if lit != 0:
                pending.append(lit)
                continue
            index = len(clauses) + 1
            if len(pending) != 3:
                raise ParseError(f'Clause {index} has {len(pending)} literals, expected 3', line=lineno, position=here)
            variables = sorted(abs(l) for l in pending)
            if variables[-1] > num_vars:
                raise ParseError(f'Clause {index} uses out-of-range variable {variables[-1]}', line=lineno, position=here)
            if len(set(variables)) != 3:
                raise ParseError(f'Clause {index} repeats a variable; literals must come from distinct variables',
                                 line=lineno, position=here)
            clauses.append(pending)
            pending = []
    if num_vars is None:
        raise ParseError('Missing header line', line=1, position=0)
    if pending:
        raise ParseError('Last clause is not terminated by 0')
    if not clauses:
        raise ParseError('Formula has no clauses; at least one is required')
    if len(clauses) != num_clauses:
        raise ParseError(f'Header announces {num_clauses} clauses, found {len(clauses)}')
    try:
        return SatInstance.from_dimacs_clauses(num_vars, clauses)
    except InputError as e:
        raise ParseError(str(e))


def write_dimacs(phi: SatInstance, comment: str = None) -> str:
    lines = []
    if comment:
        lines.extend(f'c {row}' for row in comment.splitlines())
    lines.append(f'p cnf {phi.num_vars} {phi.num_clauses}')
    lines.extend(' '.join(str(lit) for lit in clause) + ' 0' for clause in phi.to_dimacs_clauses())
    return '\n'.join(lines) + '\n'
