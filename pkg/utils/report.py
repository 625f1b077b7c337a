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

import dataclasses
import hashlib
import io
import json
import os
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from detold.graph import VertexSet

TIMING_FIELDS = ('wall_time',)


def to_jsonable(obj):
    """
    转为可 JSON 序列化的对象

    有理数输出为 "p/q" 字符串，顶点集合输出为排序后的数组
    """
    if isinstance(obj, Fraction):
        return f'{obj.numerator}/{obj.denominator}'
    if isinstance(obj, VertexSet):
        return obj.to_list()
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, pd.DataFrame):
        return [to_jsonable(row) for row in obj.to_dict(orient='records')]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if hasattr(obj, 'to_dict'):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(item) for item in obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    return obj


def digest(path) -> str:
    sha = hashlib.sha256()
    with open(path, 'rb') as f:
        for block in iter(lambda: f.read(1 << 16), b''):
            sha.update(block)
    return sha.hexdigest()


@dataclasses.dataclass
class RunReport:
    command: str
    args: Dict[str, Any] = dataclasses.field(default_factory=dict)
    inputs: Dict[str, str] = dataclasses.field(default_factory=dict)
    results: Any = None
    wall_time: float = 0.0
    workers: int = 1

    def add_input(self, name: str, path):
        if path is not None and os.path.isfile(str(path)):
            self.inputs[name] = digest(path)

    def to_dict(self, timing: bool = True):
        out = {
            'command': self.command,
            'args': to_jsonable(self.args),
            'inputs': dict(sorted(self.inputs.items())),
            'results': to_jsonable(self.results),
            'workers': self.workers,
        }
        if timing:
            out['wall_time'] = round(self.wall_time, 3)
        return out


def emit(report: RunReport, fmt: str = 'json', timing: bool = True) -> str:
    """
    把运行报告格式化为文本

    参数:
        fmt (str): 'json' 或 'tsv'；tsv 只输出 results 部分
        timing (bool): 为 False 时去掉计时字段，输出对相同输入逐字节一致
    """
    if fmt == 'json':
        return json.dumps(report.to_dict(timing), indent=2, sort_keys=True, ensure_ascii=False) + '\n'
    if fmt != 'tsv':
        raise ValueError(f'Unknown format {fmt}; expected json or tsv')
    results = report.results
    if isinstance(results, pd.DataFrame):
        frame = results.map(lambda v: to_jsonable(v) if isinstance(v, (Fraction, VertexSet)) else v)
    elif isinstance(results, dict):
        frame = pd.DataFrame([{'key': key, 'value': json.dumps(to_jsonable(value), sort_keys=True)}
                              for key, value in results.items()])
    else:
        frame = pd.DataFrame([{'value': json.dumps(to_jsonable(results), sort_keys=True)}])
    buffer = io.StringIO()
    frame.to_csv(buffer, sep='\t', index=False)
    return buffer.getvalue()


def save_run(log_dir: Optional[str], config: Dict[str, Any], report: RunReport):
    """与实验脚本相同的约定：log_dir 下写 config.json 与 result.json"""
    if not log_dir:
        return
    os.makedirs(log_dir, exist_ok=True)
    with open(os.path.join(log_dir, 'config.json'), 'w') as fp:
        json.dump(to_jsonable(config), fp, indent=4)
    with open(os.path.join(log_dir, 'result.json'), 'w') as fp:
        fp.write(emit(report, 'json'))
