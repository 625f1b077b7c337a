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

import json
import os
from pathlib import Path
from typing import Dict, List

from tqdm import tqdm

from detold.errors import InputError, ParseError
from detold.graph import Graph, VertexSet

GRAPH6_HEADER = '>>graph6<<'


def read_source(source) -> str:
    """source 可以是文件路径，也可以直接是文本内容"""
    if isinstance(source, Path) or (isinstance(source, str) and '\n' not in source and os.path.isfile(source)):
        with open(source, 'r', encoding='utf-8') as f:
            return f.read()
    return str(source)


def _lines_with_offsets(text: str):
    offset = 0
    for lineno, raw in enumerate(text.splitlines(keepends=True), start=1):
        yield lineno, offset, raw.rstrip('\r\n')
        offset += len(raw.encode('utf-8'))


def _looks_like_graph6(line: str) -> bool:
    line = line.strip()
    if line.startswith(GRAPH6_HEADER):
        return True
    return len(line.split()) == 1 and not line.isdigit() and all(63 <= ord(ch) <= 126 for ch in line)


def _parse_graph6_line(line: str, lineno: int, offset: int) -> Graph:
    body = line.strip()
    if body.startswith(GRAPH6_HEADER):
        body = body[len(GRAPH6_HEADER):]
    try:
        return Graph.from_graph6(body)
    except InputError as e:
        raise ParseError(str(e), line=lineno, position=offset)
    except Exception as e:
        raise ParseError(f'Malformed graph6 string: {e}', line=lineno, position=offset)


def _parse_edge_list(text: str) -> Graph:
    rows = [(lineno, offset, line.split('#', 1)[0].strip())
            for lineno, offset, line in _lines_with_offsets(text)]
    rows = [row for row in rows if row[2]]
    if not rows:
        raise ParseError('Empty graph input', line=1, position=0)
    lineno, offset, header = rows[0]
    try:
        n, m = (int(t) for t in header.split())
    except ValueError:
        raise ParseError(f"Malformed header '{header}', expected 'n m'", line=lineno, position=offset)
    if n < 0 or m < 0:
        raise ParseError(f"Negative counts in header '{header}'", line=lineno, position=offset)
    edges, seen = [], set()
    for lineno, offset, line in rows[1:]:
        fields = line.split()
        try:
            u, v = (int(t) for t in fields)
        except ValueError:
            raise ParseError(f"Malformed edge line '{line}'", line=lineno, position=offset)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f'Endpoint out of range for n={n}: {u} {v}', line=lineno, position=offset)
        if u == v:
            raise ParseError(f'Self-loop at {u}', line=lineno, position=offset)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f'Duplicate edge {u} {v}', line=lineno, position=offset)
        seen.add(key)
        edges.append(key)
    if len(edges) != m:
        raise ParseError(f'Header announces {m} edges, found {len(edges)}', line=rows[-1][0])
    return Graph.from_edges(n, edges)


def parse_graphs(source) -> List[Graph]:
    """
    解析图文件：graph6（每行一个图，可带 >>graph6<< 头）或边表（首行 "n m"）

    返回:
        list: graph6 文件中的全部图；边表只含一个图
    """
    text = read_source(source)
    first = next((line for _, _, line in _lines_with_offsets(text) if line.strip()), '')
    if not _looks_like_graph6(first):
        return [_parse_edge_list(text)]
    graphs = []
    for lineno, offset, line in _lines_with_offsets(text):
        if line.strip():
            graphs.append(_parse_graph6_line(line, lineno, offset))
    return graphs


def parse_graph(source) -> Graph:
    graphs = parse_graphs(source)
    if not graphs:
        raise ParseError('No graph found in input', line=1)
    if len(graphs) > 1:
        raise ParseError(f'Expected one graph, found {len(graphs)}', line=2)
    return graphs[0]


def load_corpus(paths) -> List[Graph]:
    """读入一个或多个 graph6 语料文件（或目录下的全部 .g6 文件）"""
    if isinstance(paths, (str, Path)):
        paths = [paths]
    files = []
    for path in paths:
        path = Path(path)
        files.extend(sorted(path.glob('*.g6')) if path.is_dir() else [path])
    corpus = []
    for path in tqdm(files, desc='Loading corpus', disable=len(files) < 2):
        corpus.extend(parse_graphs(path))
    return corpus


def to_edge_list(g: Graph) -> str:
    lines = [f'{g.n} {g.m}'] + [f'{u} {v}' for u, v in g.edges()]
    return '\n'.join(lines) + '\n'


def to_graph6(g: Graph) -> str:
    return g.to_graph6() + '\n'


def write_graph(g: Graph, path, fmt: str = 'edges'):
    text = to_graph6(g) if fmt == 'graph6' else to_edge_list(g)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)


def parse_vertex_set(source, n: int) -> VertexSet:
    """检测器集合：JSON 数组或以空白/逗号分隔的顶点编号"""
    text = read_source(source).strip()
    try:
        members = json.loads(text) if text.startswith('[') else [int(t) for t in text.replace(',', ' ').split()]
    except ValueError as e:
        raise ParseError(f'Malformed vertex set: {e}', line=1)
    for v in members:
        if not isinstance(v, int) or not 0 <= v < n:
            raise ParseError(f'Vertex {v} out of range for n={n}', line=1)
    return VertexSet.from_iterable(n, members)


def dump_role_map(role_map: Dict[int, dict]) -> str:
    return json.dumps({str(v): role for v, role in sorted(role_map.items())}, indent=2, ensure_ascii=False)


def load_role_map(source) -> Dict[int, dict]:
    try:
        raw = json.loads(read_source(source))
    except json.JSONDecodeError as e:
        raise ParseError(f'Malformed role map: {e.msg}', line=e.lineno, position=e.pos)
    return {int(v): role for v, role in raw.items()}
