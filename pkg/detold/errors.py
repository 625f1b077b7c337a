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


class DetoldError(Exception):
    """所有检测集相关异常的基类"""


class InputError(DetoldError, ValueError):
    """输入不合法（顶点越界、参数错误、公式格式错误等）"""


class ParseError(InputError):
    """文件解析错误，附带行号/字节位置"""

    def __init__(self, message, line=None, position=None):
        self.line = line
        self.position = position
        where = []
        if line is not None:
            where.append(f'line {line}')
        if position is not None:
            where.append(f'byte {position}')
        prefix = f"[{', '.join(where)}] " if where else ''
        super().__init__(prefix + message)


class CapabilityError(DetoldError, RuntimeError):
    """超出规模上限"""


class NoSolutionError(DetoldError):
    """请求的检测集在该图上不存在"""


class CertificationError(DetoldError):
    """证书映射得到的集合未通过验证"""


class ConstructionError(DetoldError):
    """构造搜索没有得到任何候选"""
