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
from fractions import Fraction

import pandas as pd
import pytest

from detold.errors import ParseError
from detold.graph import VertexSet
from detold.grids import PeriodicPattern
from detold.reduction import SatInstance, build_instance
from utils.cnf import parse_cnf, write_dimacs
from utils.graph_io import (load_corpus, load_role_map, dump_role_map, parse_graph, parse_graphs, parse_vertex_set,
                            to_edge_list, write_graph)
from utils.patterns import dump_pattern, load_pattern
from utils.report import RunReport, emit, save_run, to_jsonable


class TestEdgeList:
    def test_parse(self):
        g = parse_graph('# triangle with tail\n4 4\n0 1\n1 2\n0 2  # closing edge\n0 3\n')
        assert (g.n, g.m) == (4, 4)
        assert g.edges() == [(0, 1), (0, 2), (0, 3), (1, 2)]

    @pytest.mark.parametrize('text, line, fragment', [
        ('x y\n0 1\n', 1, 'Malformed header'),
        ('3 2\n0 1\n0 5\n', 3, 'out of range'),
        ('3 2\n0 1\n1 1\n', 3, 'Self-loop'),
        ('3 2\n0 1\n1 0\n', 3, 'Duplicate'),
        ('3 2\n0 1 2\n', 2, 'Malformed edge'),
        ('3 2\n0 1\n', 2, 'announces 2 edges'),
    ])
    def test_errors(self, text, line, fragment):
        with pytest.raises(ParseError) as info:
            parse_graph(text)
        assert info.value.line == line
        assert fragment in str(info.value)

    def test_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_graph('3 2\n0 1\n0 5\n')
        assert info.value.position == 8

    def test_round_trip(self, petersen, tmp_path):
        assert parse_graph(to_edge_list(petersen)) == petersen
        for fmt in ('edges', 'graph6'):
            path = tmp_path / f'petersen.{fmt}'
            write_graph(petersen, path, fmt)
            assert parse_graph(str(path)) == petersen


class TestGraph6:
    def test_single(self, k4):
        assert parse_graph('C~') == k4
        assert parse_graph('>>graph6<<C~\n') == k4

    def test_many(self, petersen, k4):
        graphs = parse_graphs(f'{petersen.to_graph6()}\n{k4.to_graph6()}\n')
        assert graphs == [petersen, k4]
        with pytest.raises(ParseError):
            parse_graph(f'{petersen.to_graph6()}\n{k4.to_graph6()}\n')

    def test_truncated_line(self):
        with pytest.raises(ParseError) as info:
            parse_graphs('C~\nC\n')
        assert info.value.line == 2

    def test_corpus_directory(self, petersen, heawood, tmp_path):
        (tmp_path / 'cubic_10.g6').write_text(petersen.to_graph6() + '\n')
        (tmp_path / 'cubic_14.g6').write_text(heawood.to_graph6() + '\n')
        (tmp_path / 'notes.txt').write_text('ignored\n')
        assert load_corpus(str(tmp_path)) == [petersen, heawood]


class TestVertexSet:
    @pytest.mark.parametrize('text', ['[0, 2, 5]', '0 2 5', '0,2,5', '5\n0\n2\n'])
    def test_formats(self, text):
        assert parse_vertex_set(text, 6) == VertexSet.from_iterable(6, [0, 2, 5])

    @pytest.mark.parametrize('text', ['0 6', '[0, 1.5]', 'a b', '[-1]'])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_vertex_set(text, 6)


class TestCnf:
    def test_parse(self):
        phi = parse_cnf('c example\np cnf 3 2\n1 -2 3 0\n-1\n2 3 0\n')
        assert phi == SatInstance.from_dimacs_clauses(3, [[1, -2, 3], [-1, 2, 3]])

    @pytest.mark.parametrize('text, fragment', [
        ('1 2 3 0\n', 'before header'),
        ('c only comments\n', 'Missing header'),
        ('p cnf 3\n', 'Bad header'),
        ('p cnf 3 1\n1 2 0\n', 'Clause 1 has 2 literals'),
        ('p cnf 3 2\n1 2 3 0\n1 -1 2 0\n', 'Clause 2 repeats a variable'),
        ('p cnf 3 1\n1 2 4 0\n', 'Clause 1 uses out-of-range variable 4'),
        ('p cnf 3 0\n', 'no clauses'),
        ('p cnf 3 2\n1 2 3 0\n', 'announces 2 clauses'),
        ('p cnf 3 1\n1 2 3\n', 'not terminated'),
        ('p cnf 3 1\n1 x 3 0\n', 'Non-integer'),
    ])
    def test_errors(self, text, fragment):
        with pytest.raises(ParseError) as info:
            parse_cnf(text)
        assert fragment in str(info.value)

    def test_error_line(self):
        with pytest.raises(ParseError) as info:
            parse_cnf('p cnf 3 2\n1 2 3 0\n\n1 -1 2 0\n')
        assert info.value.line == 4

    def test_write(self):
        phi = SatInstance.from_dimacs_clauses(5, [[1, 2, -4], [-1, 4, -5]])
        text = write_dimacs(phi, comment='two clauses')
        assert text.splitlines() == ['c two clauses', 'p cnf 5 2', '1 2 -4 0', '-1 4 -5 0']
        assert parse_cnf(text) == phi


class TestSidecars:
    def test_role_map(self):
        art = build_instance(SatInstance.from_dimacs_clauses(3, [[1, -2, 3]]))
        text = dump_role_map(art.role_map())
        assert json.loads(text)['0']['name'] == 'x1'
        assert load_role_map(text) == art.role_map()

    def test_pattern(self):
        p = PeriodicPattern('tri', (2, 0), (1, 2), frozenset({(0, 0), (1, 1), (3, 0)}))
        text = dump_pattern(p)
        assert json.loads(text)['family'] == 'tri'
        assert load_pattern(text) == p

    @pytest.mark.parametrize('text', ['{"family": "sqr"', '{"family": "sqr", "p1": [1, 0]}',
                                      '{"family": "cube", "p1": [1, 0], "p2": [0, 1], "detectors": []}',
                                      '{"family": "sqr", "p1": [1, 0], "p2": [2, 0], "detectors": []}'])
    def test_pattern_errors(self, text):
        with pytest.raises(ParseError):
            load_pattern(text)


class TestReport:
    def test_to_jsonable(self):
        assert to_jsonable(Fraction(9, 10)) == '9/10'
        assert to_jsonable(VertexSet.from_iterable(5, [4, 1])) == [1, 4]
        frame = pd.DataFrame([{'n': 10, 'density': Fraction(9, 10)}])
        assert to_jsonable({'rows': frame}) == {'rows': [{'n': 10, 'density': '9/10'}]}

    def test_emit_is_deterministic(self):
        def make():
            report = RunReport('solve', args={'level': 'det-old', 'graph': 'g.txt'}, results={'optimum': 9})
            report.wall_time = 0.123
            return report

        first, second = emit(make(), timing=False), emit(make(), timing=False)
        assert first == second
        assert 'wall_time' not in json.loads(first)
        assert json.loads(emit(make()))['wall_time'] == 0.123

    def test_emit_tsv(self):
        report = RunReport('cubic scan', results=pd.DataFrame([{'n': 10, 'density': Fraction(9, 10)}]))
        assert emit(report, 'tsv').splitlines() == ['n\tdensity', '10\t9/10']
        with pytest.raises(ValueError):
            emit(report, 'xml')

    def test_save_run(self, tmp_path):
        report = RunReport('verify', results={'ok': True})
        save_run(str(tmp_path / 'run'), {'graph': 'g.txt', 'set': '0 1'}, report)
        assert json.loads((tmp_path / 'run' / 'config.json').read_text()) == {'graph': 'g.txt', 'set': '0 1'}
        assert json.loads((tmp_path / 'run' / 'result.json').read_text())['results'] == {'ok': True}

    def test_add_input_digest(self, tmp_path):
        path = tmp_path / 'g.txt'
        path.write_text('3 0\n')
        report = RunReport('solve')
        report.add_input('graph', str(path))
        report.add_input('missing', str(tmp_path / 'nope.txt'))
        assert list(report.inputs) == ['graph'] and len(report.inputs['graph']) == 64
