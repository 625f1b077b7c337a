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
import sys

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from detold.graph import Graph, disjoint_union, named_graph  # noqa: E402
from utils.graph_io import load_corpus  # noqa: E402

CORPUS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'corpus')

# 随机测试固定种子；验收时用 HYPOTHESIS_PROFILE=acceptance 跑 10^4 个样例
settings.register_profile('default', derandomize=True, max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('acceptance', derandomize=True, max_examples=10_000, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'default'))


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run long acceptance sweeps')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long-running acceptance sweeps')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope='session')
def petersen():
    return named_graph('petersen')


@pytest.fixture(scope='session')
def heawood():
    return named_graph('heawood')


@pytest.fixture(scope='session')
def k4():
    return named_graph('k4')


@pytest.fixture(scope='session')
def k33():
    return named_graph('k33')


@pytest.fixture(scope='session')
def c7():
    return named_graph('cycle', 7)


@pytest.fixture(scope='session')
def two_petersens(petersen):
    return disjoint_union(petersen, petersen)


@pytest.fixture(scope='session')
def triangle_with_tail():
    # 三角形 {0, 1, 2} 加上边 0-3
    return Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)])


@pytest.fixture(scope='session')
def edge_bound_graph():
    # 9 圈加三条弦：12 条边且 DET:OLD = 9
    cycle = [(i, (i + 1) % 9) for i in range(9)]
    return Graph.from_edges(9, cycle + [(1, 5), (2, 7), (4, 8)])


@pytest.fixture(scope='session')
def shipped_corpus():
    # n = 10, 12, 14 的全部无 C4 连通立方图：3 + 8 + 36 个
    return load_corpus(CORPUS_DIR)


@pytest.fixture(scope='session')
def cubic_corpus(shipped_corpus):
    return [g for g in shipped_corpus if g.n <= 12]


@pytest.fixture(scope='session')
def nx_petersen():
    return nx.petersen_graph()
