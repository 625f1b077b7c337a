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

from detold.errors import InputError, ParseError
from detold.grids import PeriodicPattern
from utils.graph_io import read_source


def dump_pattern(p: PeriodicPattern) -> str:
    return json.dumps({
        'family': p.family.value,
        'p1': list(p.p1),
        'p2': list(p.p2),
        'detectors': [list(cell) for cell in sorted(p.detectors)],
    }, indent=2) + '\n'


def load_pattern(source) -> PeriodicPattern:
    """读取 {family, p1, p2, detectors: [[x, y], ...]} 格式的模式文件"""
    try:
        raw = json.loads(read_source(source))
    except json.JSONDecodeError as e:
        raise ParseError(f'Malformed pattern JSON: {e.msg}', line=e.lineno, position=e.pos)
    missing = [key for key in ('family', 'p1', 'p2', 'detectors') if key not in raw]
    if missing:
        raise ParseError(f"Pattern is missing {', '.join(missing)}")
    try:
        return PeriodicPattern(raw['family'], tuple(raw['p1']), tuple(raw['p2']),
                               frozenset(tuple(cell) for cell in raw['detectors']))
    except (TypeError, InputError) as e:
        raise ParseError(f'Invalid pattern: {e}')
